//! Reading system files and builtin references.

use selfsim::format::{parse_chain, parse_system, ModuleDecl, SystemFile};
use selfsim::solvability::PreorderChain;
use selfsim::{Error, Result};

pub fn load_system(arg: &str) -> Result<SystemFile> {
    if arg.trim_start().starts_with("builtin:") {
        return SystemFile::builtin(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Invalid(format!("cannot read {arg}: {e}")))?;
    parse_system(&text)
}

pub fn load_chain(path: &str) -> Result<PreorderChain> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?;
    parse_chain(&text)
}

/// The module named on the command line, or the last one declared.
pub fn active_module<'a>(f: &'a SystemFile, name: Option<&str>) -> Result<&'a ModuleDecl> {
    match name {
        Some(n) => f.module(n).ok_or_else(|| Error::Unknown(n.to_string())),
        None => f.modules.last().ok_or_else(|| Error::Invalid("the file declares no module".into())),
    }
}
