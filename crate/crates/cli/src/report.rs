//! Line-prefixed report records.

use std::fmt::Display;

use selfsim::Error;

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failed: bool,
    error: Option<u8>,
}

impl Report {
    pub fn command(&mut self, argv: &[String]) {
        self.lines.push(format!("COMMAND {}", argv.join(" ")));
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("PARAM {key}={value}"));
    }

    pub fn verdict(&mut self, pass: bool, text: impl Display) {
        self.failed |= !pass;
        self.lines.push(format!("VERDICT {} {text}", if pass { "pass" } else { "fail" }));
    }

    pub fn witness(&mut self, text: impl Display) {
        self.lines.push(format!("WITNESS {text}"));
    }

    pub fn count(&mut self, n: impl Display, what: impl Display) {
        self.lines.push(format!("COUNT {n} {what}"));
    }

    pub fn warn(&mut self, text: impl Display) {
        self.lines.push(format!("WARN {text}"));
    }

    pub fn info(&mut self, text: impl Display) {
        self.lines.push(format!("INFO {text}"));
    }

    pub fn item(&mut self, text: impl Display) {
        self.lines.push(format!("ITEM {text}"));
    }

    /// Records an error; the exit code follows its kind.
    pub fn error(&mut self, e: &Error) {
        let code = match e {
            Error::BoundExceeded(_) => 3,
            _ => 2,
        };
        self.error = Some(self.error.map_or(code, |c| c.max(code)));
        self.lines.push(format!("ERROR {e}"));
    }

    /// A validation failure: exit code 2, reported without a verdict.
    pub fn invalid(&mut self, text: impl Display) {
        self.error = Some(self.error.map_or(2, |c| c.max(2)));
        self.lines.push(format!("ERROR {text}"));
    }

    pub fn time(&mut self, ms: u128) {
        self.lines.push(format!("TIME {ms}ms"));
    }

    pub fn exit_code(&self) -> u8 {
        match self.error {
            Some(c) => c,
            None => u8::from(self.failed),
        }
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }
}
