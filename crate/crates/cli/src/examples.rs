//! Worked examples on the builtin systems.

use clap::{Args, ValueEnum};
use selfsim::builtin::System;
use selfsim::complexes::{count_complexes, enumerate_complexes};
use selfsim::examples::{freyd, lin, zip};
use selfsim::solvability::factorization_final_subset;
use selfsim::{Budget, Error, Result};

use crate::report::Report;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Streams,
    Trees,
    Freyd,
    Lin,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    /// Which builtin system.
    which: Which,
    /// Demo to run (streams: zip|counts; trees: counts;
    /// freyd: beh|surjective|well-defined|separating|serial; lin: laws|final).
    demo: String,
    #[arg(long, default_value_t = 6)]
    prefix: usize,
    /// Number of random stream pairs for `zip`.
    #[arg(long, default_value_t = 20)]
    pairs: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    alphabet: u32,
    #[arg(long, default_value_t = 2)]
    labels: u32,
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Binary digits for `freyd beh`, e.g. `0110`.
    #[arg(long)]
    digits: Option<String>,
    /// Chain size for `lin laws`.
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 3)]
    height: u32,
}

fn unknown(which: Which, demo: &str) -> Error {
    Error::Invalid(format!("no demo `{demo}` for {which:?}"))
}

pub fn run(r: &mut Report, a: ExampleArgs, budget: &Budget) -> Result<()> {
    r.param("demo", format!("{:?} {}", a.which, a.demo).to_lowercase());
    match a.which {
        Which::Streams => streams(r, &a, budget),
        Which::Trees => trees(r, &a, budget),
        Which::Freyd => freyd_demo(r, &a, budget),
        Which::Lin => lin_demo(r, &a, budget),
    }
}

fn counts(r: &mut Report, s: &System, depth: usize) {
    r.param("system", s.key());
    for n in 0..=depth {
        r.count(count_complexes(s, n, None), format!("complexes of depth {n} within bound {}", s.bound));
    }
}

fn streams(r: &mut Report, a: &ExampleArgs, budget: &Budget) -> Result<()> {
    let s = System::streams(a.alphabet, a.bound.unwrap_or(4));
    match a.demo.as_str() {
        "zip" => {
            r.param("system", s.key());
            r.param("prefix", a.prefix);
            r.param("seed", a.seed);
            let pairs = zip::random_pairs(a.alphabet, a.pairs, a.seed);
            let z = zip::zip_demo(&s, &pairs, a.prefix, budget)?;
            r.count(z.states, "coalgebra states");
            r.count(z.square_failures, "failing squares");
            for c in &z.cases {
                let ok = c.expected == c.got;
                let fmt = |v: &[u32]| v.iter().map(u32::to_string).collect::<String>();
                r.item(format!(
                    "zip({}, {}) = {} expected {}{}",
                    c.left.render(),
                    c.right.render(),
                    fmt(&c.got),
                    fmt(&c.expected),
                    if ok { "" } else { " MISMATCH" }
                ));
            }
            r.verdict(z.holds(), format!("the solution of zip interleaves its inputs up to length {}", a.prefix));
            Ok(())
        }
        "counts" => {
            counts(r, &s, a.depth);
            Ok(())
        }
        d => Err(unknown(a.which, d)),
    }
}

fn trees(r: &mut Report, a: &ExampleArgs, _budget: &Budget) -> Result<()> {
    let s = System::trees(a.labels, a.bound.unwrap_or(3));
    match a.demo.as_str() {
        "counts" => {
            counts(r, &s, a.depth);
            Ok(())
        }
        d => Err(unknown(a.which, d)),
    }
}

fn freyd_demo(r: &mut Report, a: &ExampleArgs, budget: &Budget) -> Result<()> {
    let s = System::freyd(a.bound.unwrap_or(4));
    r.param("system", s.key());
    match a.demo.as_str() {
        "beh" => {
            let digits: Vec<u8> = a
                .digits
                .as_deref()
                .unwrap_or("0110")
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::Invalid(format!("`{c}` is not a binary digit"))),
                })
                .collect::<Result<_>>()?;
            let c = freyd::digit_complex(&s, &digits)?;
            r.item(c.render(&s));
            let head = s.carrier(c.head());
            for x in 0..head.n as u32 {
                r.item(format!("beh({x}) = {}", freyd::beh(&s, &c, x).render()));
            }
            match freyd::five_squares(&s, &c) {
                Ok(k) => r.verdict(true, format!("the five-chain map commutes with {k} levels")),
                Err(why) => r.verdict(false, format!("the five-chain map: {why}")),
            }
        }
        "surjective" => {
            let v = freyd::beh_surjective(&s, a.depth)?;
            r.count(v.hit, format!("of {} digit strings of length {} hit", v.total, v.depth));
            for m in v.misses.iter().take(5) {
                r.witness(m);
            }
            r.verdict(v.holds(), "every digit string is the behaviour of some complex");
        }
        "well-defined" | "separating" => {
            let well = a.demo == "well-defined";
            let v = if well { freyd::beh_well_defined(&s, a.depth, budget)? } else { freyd::beh_separating(&s, a.depth, budget)? };
            r.count(v.points, format!("points at depth {}", v.depth));
            r.count(v.groups, "groups");
            r.count(v.squares_checked, "checks");
            if v.undetermined > 0 {
                r.info(format!("{} points with undetermined digits", v.undetermined));
            }
            for f in v.failures.iter().take(5) {
                r.witness(f);
            }
            let what = if well {
                "behaviour is constant along every generating identification"
            } else {
                "distinct behaviours are separated by the five-chain squares"
            };
            r.verdict(v.holds(), what);
        }
        "serial" => {
            let bound = a.bound.unwrap_or(4);
            let v = freyd::no_serial_squares(&s, bound, budget)?;
            r.count(v.blocked_pairs, "parallel pairs without a coequalizer");
            r.count(v.direct_clash, "of them with a point sent to 0 and to 1");
            r.count(v.configurations, "square configurations searched");
            for c in v.counterexamples.iter().take(5) {
                r.witness(c);
            }
            r.verdict(v.holds(), "no serially commutative square over a pair with a 0/1 clash");
            if v.indirect_squares > 0 {
                r.warn(format!("{} squares over pairs blocked only transitively", v.indirect_squares));
                if let Some(x) = &v.indirect_example {
                    r.info(format!("example: {x}"));
                }
            }
        }
        d => return Err(unknown(a.which, d)),
    }
    Ok(())
}

fn lin_demo(r: &mut Report, a: &ExampleArgs, budget: &Budget) -> Result<()> {
    match a.demo.as_str() {
        "laws" => {
            r.param("size", a.size);
            r.param("height", a.height);
            let v = lin::check_lin_laws(a.size, a.height);
            r.count(v.factorizations, "factorizations");
            r.count(v.compositions, "compositions");
            r.count(v.diagonals, "diagonal fills");
            r.count(v.preserved, "preservation checks");
            for f in v.failures.iter().take(5) {
                r.witness(f);
            }
            r.verdict(v.holds(), "jointly epi / mono factorization laws");
        }
        "final" => {
            let s = System::lin(false, a.bound.unwrap_or(2), a.height.min(2));
            r.param("system", s.key());
            let cs = enumerate_complexes(&s, a.depth.min(1), None, budget)?;
            let pick: Vec<_> = cs.iter().filter(|c| s.carrier(c.head()).n > 0).take(2).cloned().collect();
            for c in &pick {
                r.item(format!("source {}", c.render(&s)));
            }
            let family = factorization_final_subset(&s, &lin::kchains(&s, &pick), Some(&lin::LinFactorization))?;
            r.count(family.len(), "cones in the factorization family");
            let v = lin::check_final_family(&s, &pick, &family, budget)?;
            r.count(v.cones, "cones checked");
            for u in v.unfactored.iter().take(5) {
                r.witness(u);
            }
            r.verdict(v.holds(), "every cone factors through the family");
        }
        d => return Err(unknown(a.which, d)),
    }
    Ok(())
}
