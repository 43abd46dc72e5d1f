//! One line per acceptance criterion, then a single assertion over all of them.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use selfsim::builtin::System;
use selfsim::complexes::enumerate_complexes;
use selfsim::examples::{freyd, lin, zip};
use selfsim::fincat::is_cofiltered;
use selfsim::format::parse_system;
use selfsim::props;
use selfsim::solvability::factorization_final_subset;
use selfsim::Budget;

type Outcome = Result<String, String>;

struct Run {
    code: i32,
    lines: Vec<String>,
}

impl Run {
    fn has(&self, prefix: &str) -> bool {
        self.lines.iter().any(|l| l.starts_with(prefix))
    }

    fn verdicts(&self) -> (usize, usize) {
        let pass = self.lines.iter().filter(|l| l.starts_with("VERDICT pass")).count();
        let fail = self.lines.iter().filter(|l| l.starts_with("VERDICT fail")).count();
        (pass, fail)
    }
}

fn selfsim(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 report");
    Run { code: out.status.code().unwrap_or(-1), lines: text.lines().map(str::to_string).collect() }
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// All words of length `n` over `k` letters, enumerated directly.
fn words(k: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..k).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out
}

fn streams_exactness() -> Outcome {
    for n in 1..=5usize {
        let run = selfsim(&["final", "builtin:streams(alphabet=2,bound=4)", "--depth", &n.to_string(), "--anchor", "1"]);
        ensure(run.code == 0, format!("depth {n}: exit {}", run.code))?;
        let expected = words(2, n).len();
        let count = format!("COUNT {expected} classes anchor=1 depth={n}");
        ensure(run.has(&count), format!("depth {n}: no `{count}`"))?;
        let (pass, fail) = run.verdicts();
        ensure(fail == 0 && pass == n, format!("depth {n}: {pass} bijections passed, {fail} failed"))?;
    }
    Ok("2^n classes and bijective ι_n for n = 1..5".into())
}

fn interleave(s: &[u32], t: &[u32], n: usize) -> Vec<u32> {
    (0..n).map(|i| if i % 2 == 0 { s[i / 2] } else { t[i / 2] }).collect()
}

fn zip_correctness() -> Outcome {
    let run = selfsim(&["example", "streams", "zip", "--prefix", "6"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let items = run.lines.iter().filter(|l| l.starts_with("ITEM zip(")).count();
    ensure(items == 20, format!("{items} pairs reported"))?;
    ensure(!run.lines.iter().any(|l| l.contains("MISMATCH")), "a mismatch was reported")?;
    // the same pairs, checked against interleaving computed here
    let s = System::streams(2, 4);
    let pairs = zip::random_pairs(2, 20, 0x5eed);
    let r = zip::zip_demo(&s, &pairs, 6, &Budget::unlimited()).map_err(|e| e.to_string())?;
    for c in &r.cases {
        let want = interleave(&c.left.take(3), &c.right.take(3), 6);
        ensure(c.got == want, format!("zip({}, {}) gave {:?}", c.left.render(), c.right.render(), c.got))?;
    }
    Ok(format!("{} random pairs match interleaving to length 6", r.cases.len()))
}

fn flatness() -> Outcome {
    let r = props::flatness_theorems(3, 5, 6);
    ensure(r.holds(), format!("{:?}", r.failures))?;
    ensure(r.categories == 5 && r.tensors > 0, format!("{r:?}"))?;
    Ok(format!(
        "{} identity checks over 5 categories, {} tensors of {} flat modules, zero failures",
        r.identity_checks, r.tensors, r.flat_inputs
    ))
}

fn coend_oracle() -> Outcome {
    let r = props::coend_agreement(4, 50, 20, 200);
    ensure(r.holds(), format!("{:?}", r.failures))?;
    ensure(r.instances == 50 && r.max_pairs <= 200, format!("{} instances, max {} pairs", r.instances, r.max_pairs))?;
    Ok(format!("50 instances, {} pairs into {} classes, partitions equal", r.total_pairs, r.total_classes))
}

fn strong_run(key: &str, depth: &str) -> Result<Run, String> {
    let run = selfsim(&["solvable", key, "--strong", "--depth", depth]);
    let (pass, fail) = run.verdicts();
    ensure(run.code == 0 && fail == 0 && pass > 0, format!("exit {}, {pass} pass, {fail} fail", run.code))?;
    ensure(run.has("WITNESS span") && run.has("WITNESS fork"), "no span or fork witness")?;
    Ok(run)
}

fn trees_ssc() -> Outcome {
    strong_run("builtin:trees(labels=1,bound=4)", "3")?;
    Ok("SSC holds at depths 0..3 with verified span and fork witnesses".into())
}

fn freyd_ssc() -> Outcome {
    let run = strong_run("builtin:freyd(bound=4)", "2")?;
    ensure(
        run.has("VERDICT pass no serially commutative square over a pair with a 0/1 clash within bound 4 (exhaustive)"),
        "serial-square search missing",
    )?;
    ensure(run.has("VERDICT pass no parallel pair of complexes has a blocked component"), "chain analysis missing")?;
    Ok("SSC holds at depths 0..2; no blocked pair extends through squares forever within bound 4".into())
}

fn behaviour_map() -> Outcome {
    let s = System::freyd(4);
    let b = Budget::unlimited();
    for n in 1..=5 {
        let r = freyd::beh_surjective(&s, n).map_err(|e| e.to_string())?;
        ensure(r.holds() && r.hit == 1 << n, format!("depth {n}: {} of {} hit", r.hit, r.total))?;
    }
    let w = freyd::beh_well_defined(&s, 2, &b).map_err(|e| e.to_string())?;
    ensure(w.holds(), format!("well-defined: {:?}", w.failures.first()))?;
    let sep = freyd::beh_separating(&s, 2, &b).map_err(|e| e.to_string())?;
    ensure(sep.holds(), format!("separating: {:?}", sep.failures.first()))?;
    let mut squares = 0;
    for digits in words(2, 4) {
        let d: Vec<u8> = digits.iter().map(|&x| x as u8).collect();
        let c = freyd::digit_complex(&s, &d).map_err(|e| e.to_string())?;
        squares += freyd::five_squares(&s, &c).map_err(|e| format!("{digits:?}: {e}"))?;
    }
    Ok(format!(
        "surjective for n <= 5; {} points well-defined over {} checks; separated; {squares} five-chain squares",
        w.points, w.squares_checked
    ))
}

fn koenig() -> Outcome {
    let a = props::koenig_agreement(8, 100, 12);
    ensure(a.holds(), format!("{:?}", a.failures))?;
    ensure(a.passing > 0 && a.passing < 100, format!("{} of 100 pass", a.passing))?;
    let t = props::thread_trials(50, 40, 50);
    ensure(t.holds(), format!("{:?}", t.failures))?;
    ensure(t.empty == 10 && t.threaded == 30, format!("{t:?}"))?;
    Ok(format!(
        "checker equals powerset oracle on 100 chains; {} threads of depth 50, {} EmptyLevel",
        t.threaded, t.empty
    ))
}

fn propagation() -> Outcome {
    let st = props::propagation_trials(&Arc::new(System::streams(2, 2)), 0, 10);
    ensure(st.holds(), format!("streams: {:?}", st.failures))?;
    let tr = props::propagation_trials(&Arc::new(System::trees(1, 2)), 100, 10);
    ensure(tr.holds(), format!("trees: {:?}", tr.failures))?;
    Ok(format!(
        "{} diagrams ({} pairs, {} parallel pairs) verified and connected",
        st.accepted + tr.accepted,
        st.pairs + tr.pairs,
        st.parallel + tr.parallel
    ))
}

fn lin_factorization() -> Outcome {
    let laws = lin::check_lin_laws(3, 3);
    ensure(laws.holds(), format!("{:?}", laws.failures.first()))?;
    ensure(laws.preserved > 0, "no preservation checks")?;
    let s = System::lin(false, 2, 2);
    let b = Budget::unlimited();
    let cs = enumerate_complexes(&s, 1, None, &b).map_err(|e| e.to_string())?;
    let pick: Vec<_> = cs.iter().filter(|c| s.carrier(c.head()).n > 0).take(2).cloned().collect();
    let family = factorization_final_subset(&s, &lin::kchains(&s, &pick), Some(&lin::LinFactorization))
        .map_err(|e| e.to_string())?;
    let r = lin::check_final_family(&s, &pick, &family, &b).map_err(|e| e.to_string())?;
    ensure(r.holds() && r.cones > 0, format!("{:?}", r.unfactored))?;
    Ok(format!(
        "{} factorizations, {} preservation checks; family of {} is final over {} cones",
        laws.factorizations, laws.preserved, r.family, r.cones
    ))
}

fn necessity() -> Outcome {
    let path = data("discrete.sys");
    let run = selfsim(&["final", &path, "--depth", "1"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let warn = run.lines.iter().find(|l| l.starts_with("WARN") && l.contains("non-cofiltered"));
    ensure(warn.is_some_and(|w| w.contains("objects x and y have no span")), "no impossibility warning")?;
    let f = parse_system(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let c = &f.categories[0];
    let v = is_cofiltered(c.as_ref());
    ensure(!v.holds(), "the discrete base was reported cofiltered")?;
    Ok(format!("warning emitted; is_cofiltered: {}", v.describe(c.as_ref())))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("streams exactness", streams_exactness),
        ("zip correctness", zip_correctness),
        ("flatness of identities and tensors", flatness),
        ("coend oracle equivalence", coend_oracle),
        ("strong solvability for trees", trees_ssc),
        ("strong solvability for the smash square", freyd_ssc),
        ("behaviour map", behaviour_map),
        ("chain conditions and threads", koenig),
        ("weak to strong propagation", propagation),
        ("linear-order factorization", lin_factorization),
        ("necessity of cofilteredness", necessity),
    ];
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("panicked".into()))).collect()
    });
    let mut failed = Vec::new();
    for (k, ((name, _), r)) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: pass {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: fail {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
