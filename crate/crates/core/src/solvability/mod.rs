//! Solvability conditions at bounded depth, their propagation, cone preorders
//! and the chain-of-preorders machinery.
//!
//! Verdicts are relative to a depth and an object bound. A pass means the
//! condition held on everything that was examined, nothing more.

mod cones;
mod koenig;

pub use cones::*;
pub use koenig::*;

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::builtin::{KChain, KCone, KMap, System};
use crate::complexes::{count_complexes, enumerate_complexes, enumerate_morphisms, is_complex_morphism, ComplexMorphism, TruncatedComplex};
use crate::error::{Error, Result};
use crate::fincat::{find_fork, find_span, Category, Mor, Obj};
use crate::module::{elems, elems_from, Elem, Module};

#[derive(Clone, Debug)]
pub struct Options {
    /// Extra depth the tested pairs must extend to (strong condition only).
    pub lookahead: usize,
    /// Builtins: number of sampled complexes when the space is too large.
    pub pool: usize,
    /// Builtins: cap on morphisms enumerated between two sampled complexes.
    pub morphism_cap: usize,
    /// Spaces with at most this many complexes are examined exhaustively.
    pub exhaustive_limit: u128,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { lookahead: 1, pool: 48, morphism_cap: 24, exhaustive_limit: 400, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Empty,
    NoSpan { left: TruncatedComplex, right: TruncatedComplex },
    NoFork { src: TruncatedComplex, dst: TruncatedComplex, u: ComplexMorphism, v: ComplexMorphism },
    NoHeadSpan { left: Obj, right: Obj },
    NoHeadFork { u: Mor, v: Mor },
    /// A constructed witness did not pass the square checks.
    BadWitness(String),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub condition: &'static str,
    pub depth: usize,
    pub bound: Option<usize>,
    pub failure: Option<Failure>,
    pub pairs_checked: u64,
    pub parallel_checked: u64,
    /// Witnesses built on objects outside the bound (checked on carriers).
    pub beyond_bound: u64,
    pub exhaustive: bool,
    pub witnesses: Vec<String>,
    pub warnings: Vec<String>,
}

impl Verdict {
    fn new(condition: &'static str, m: &dyn Module, depth: usize) -> Self {
        Verdict {
            condition,
            depth,
            bound: m.bound(),
            failure: None,
            pairs_checked: 0,
            parallel_checked: 0,
            beyond_bound: 0,
            exhaustive: true,
            witnesses: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }

    pub fn summary(&self) -> String {
        let scope = match self.bound {
            Some(b) => format!("at depth {} within bound {}", self.depth, b),
            None => format!("at depth {}", self.depth),
        };
        if self.holds() {
            format!("{} holds {}", self.condition, scope)
        } else {
            format!("{} fails {}", self.condition, scope)
        }
    }

    pub fn describe_failure(&self, m: &dyn Module) -> Option<String> {
        let c = m.base();
        self.failure.as_ref().map(|f| match f {
            Failure::Empty => "no complexes at this depth".to_string(),
            Failure::NoSpan { left, right } => {
                format!("no span for {} and {}", left.render(m), right.render(m))
            }
            Failure::NoFork { src, dst, u, v } => format!(
                "no fork for {} and {} : {} => {}",
                u.render(c),
                v.render(c),
                src.render(m),
                dst.render(m)
            ),
            Failure::NoHeadSpan { left, right } => {
                format!("no span of heads {} and {}", c.obj_name(*left), c.obj_name(*right))
            }
            Failure::NoHeadFork { u, v } => format!("no fork of heads {} and {}", c.mor_name(*u), c.mor_name(*v)),
            Failure::BadWitness(s) => format!("constructed witness fails square checks: {s}"),
        })
    }
}

/// Pairs and parallel pairs under test, already truncated to the checked depth.
#[derive(Clone, Debug, Default)]
pub struct TestSpace {
    pub complexes: Vec<TruncatedComplex>,
    pub parallel: Vec<(usize, usize, ComplexMorphism, ComplexMorphism)>,
    pub exhaustive: bool,
    /// Parallel pairs dropped because their deepest components cannot extend.
    pub pruned: usize,
}

/// Decides from the deepest components of a parallel pair whether it extends
/// to a parallel pair of infinite complexes.
pub type Extends<'a> = &'a dyn Fn(Mor, Mor) -> bool;

/// Complexes of depth `n` that extend to depth `n + lookahead`, and parallel
/// pairs that are truncations of deeper parallel pairs. Exhaustive when small,
/// otherwise a seeded sample (builtins only).
pub fn test_space(m: &dyn Module, n: usize, lookahead: usize, opts: &Options, budget: &Budget) -> Result<TestSpace> {
    test_space_with(m, n, lookahead, opts, budget, &|_, _| true)
}

/// As [`test_space`], dropping parallel pairs rejected by `extends`.
pub fn test_space_with(
    m: &dyn Module,
    n: usize,
    lookahead: usize,
    opts: &Options,
    budget: &Budget,
    extends: Extends,
) -> Result<TestSpace> {
    let deep = n + lookahead;
    let total = count_complexes(m, deep, None);
    let (pool, exhaustive) = if m.concrete().is_none() || total <= opts.exhaustive_limit {
        (enumerate_complexes(m, deep, None, budget)?, true)
    } else {
        (sample_complexes(m.concrete().expect("builtin"), deep, opts), false)
    };
    let mut index: HashMap<TruncatedComplex, usize> = HashMap::new();
    let mut complexes = Vec::new();
    for c in &pool {
        let t = c.truncate(n)?;
        if !index.contains_key(&t) {
            index.insert(t.clone(), complexes.len());
            complexes.push(t);
        }
    }
    let mut seen = HashSet::new();
    let mut parallel = Vec::new();
    let mut dropped = HashSet::new();
    for x in &pool {
        for y in &pool {
            let morphs = match m.concrete() {
                Some(sys) if !exhaustive => sys.chain_maps_limited(x, y, None, opts.morphism_cap),
                _ => enumerate_morphisms(m, x, y),
            };
            budget.charge(morphs.len() as u64 + 1, "enumerating complex morphisms")?;
            for (i, u) in morphs.iter().enumerate() {
                for v in &morphs[i + 1..] {
                    let (un, vn) = (u.truncate(n), v.truncate(n));
                    if un == vn {
                        continue;
                    }
                    let (xi, yi) = (index[&x.truncate(n)?], index[&y.truncate(n)?]);
                    let key = (xi, yi, un.clone().min(vn.clone()), un.clone().max(vn.clone()));
                    let (du, dv) = (*u.comps.last().expect("depth"), *v.comps.last().expect("depth"));
                    if !extends(du, dv) {
                        dropped.insert(key);
                        continue;
                    }
                    if seen.insert(key.clone()) {
                        parallel.push(key);
                    }
                }
            }
        }
    }
    let pruned = dropped.iter().filter(|k| !seen.contains(*k)).count();
    Ok(TestSpace { complexes, parallel, exhaustive, pruned })
}

/// A seeded sample of depth-`n` complexes with varied object sizes.
pub fn sample_complexes(sys: &System, n: usize, opts: &Options) -> Vec<TruncatedComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let c = sys.base();
    let objs: Vec<Obj> = c.objects().collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut attempts = 0;
    while out.len() < opts.pool && attempts < opts.pool * 20 {
        attempts += 1;
        let cap = rng.gen_range(0..=sys.bound);
        let head = *objs.choose(&mut rng).expect("objects");
        let mut t = TruncatedComplex::single(head);
        let mut ok = true;
        for _ in 0..n {
            let last = t.last();
            let mut options: Vec<Elem> = objs
                .iter()
                .filter(|&&a| sys.carrier(a).n <= cap.max(1))
                .flat_map(|&a| elems(sys, a, last))
                .collect();
            if options.is_empty() {
                options = objs.iter().flat_map(|&a| elems(sys, a, last)).collect();
            }
            match options.choose(&mut rng) {
                Some(&e) => t = t.extend(e),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

/// The Strong Solvability Condition at depth `n`: nonemptiness, spans and
/// equalizing forks in `Complex_n`, tested on pairs that extend `lookahead`
/// levels deeper.
pub fn check_strong(m: &dyn Module, n: usize, opts: &Options, budget: &Budget) -> Result<Verdict> {
    check_strong_with(m, n, opts, budget, &|_, _| true)
}

/// As [`check_strong`], skipping parallel pairs that `extends` shows are not
/// truncations of parallel pairs of infinite complexes.
pub fn check_strong_with(m: &dyn Module, n: usize, opts: &Options, budget: &Budget, extends: Extends) -> Result<Verdict> {
    let mut v = Verdict::new("SSC", m, n);
    let space = test_space_with(m, n, opts.lookahead, opts, budget, extends)?;
    if space.pruned > 0 {
        v.warnings.push(format!(
            "{} parallel pairs skipped: their deepest components admit no infinite chain of squares",
            space.pruned
        ));
    }
    v.exhaustive = space.exhaustive;
    if opts.lookahead > 0 {
        v.warnings.push(format!(
            "tested pairs and parallel pairs are truncations of depth-{} data; cones are sought in Complex_{}",
            n + opts.lookahead,
            n
        ));
    }
    if !space.exhaustive {
        v.warnings.push(format!(
            "pairs drawn from a seeded sample of {} complexes (seed {:#x}); not exhaustive",
            space.complexes.len(),
            opts.seed
        ));
    }
    if space.complexes.is_empty() {
        v.failure = Some(Failure::Empty);
        return Ok(v);
    }
    match m.concrete() {
        Some(sys) => strong_builtin(sys, &space, &mut v),
        None => strong_search(m, &space, n, budget, &mut v)?,
    }
    Ok(v)
}

fn strong_search(m: &dyn Module, space: &TestSpace, n: usize, budget: &Budget, v: &mut Verdict) -> Result<()> {
    let c = m.base();
    let all = enumerate_complexes(m, n, None, budget)?;
    // into[x] = (vertex, morphism) for every morphism into tested complex x
    let mut into: Vec<Vec<(usize, ComplexMorphism)>> = Vec::new();
    for x in &space.complexes {
        let mut list = Vec::new();
        for (e, ee) in all.iter().enumerate() {
            for f in enumerate_morphisms(m, ee, x) {
                list.push((e, f));
            }
        }
        budget.charge(list.len() as u64 + 1, "searching cones")?;
        into.push(list);
    }
    let reach: Vec<HashSet<usize>> = into.iter().map(|l| l.iter().map(|(e, _)| *e).collect()).collect();
    for i in 0..space.complexes.len() {
        for j in i..space.complexes.len() {
            v.pairs_checked += 1;
            match reach[i].iter().find(|e| reach[j].contains(e)) {
                Some(&e) => {
                    if v.witnesses.is_empty() {
                        v.witnesses.push(format!(
                            "span {} over {} and {}",
                            all[e].render(m),
                            space.complexes[i].render(m),
                            space.complexes[j].render(m)
                        ));
                    }
                }
                None => {
                    v.failure = Some(Failure::NoSpan { left: space.complexes[i].clone(), right: space.complexes[j].clone() });
                    return Ok(());
                }
            }
        }
    }
    for (xi, yi, u, w) in &space.parallel {
        v.parallel_checked += 1;
        let found = into[*xi].iter().find(|(_, f)| {
            ComplexMorphism::compose(c, u, f) == ComplexMorphism::compose(c, w, f)
        });
        match found {
            Some((e, _)) => {
                if v.witnesses.len() < 2 {
                    v.witnesses.push(format!("fork {} for {} and {}", all[*e].render(m), u.render(c), w.render(c)));
                }
            }
            None => {
                v.failure = Some(Failure::NoFork {
                    src: space.complexes[*xi].clone(),
                    dst: space.complexes[*yi].clone(),
                    u: u.clone(),
                    v: w.clone(),
                });
                return Ok(());
            }
        }
    }
    Ok(())
}

fn strong_builtin(sys: &System, space: &TestSpace, v: &mut Verdict) {
    let kc: Vec<KChain> = space.complexes.iter().map(|c| sys.kchain(c)).collect();
    for i in 0..kc.len() {
        for j in i..kc.len() {
            v.pairs_checked += 1;
            let cone = sys.span_cone(&kc[i], &kc[j]);
            let srcs = [&space.complexes[i], &space.complexes[j]];
            match verify_cone(sys, &srcs, &cone) {
                Ok(Some(text)) => {
                    if v.witnesses.is_empty() {
                        v.witnesses.push(format!("span {text}"));
                    }
                }
                Ok(None) => v.beyond_bound += 1,
                Err(e) => {
                    v.failure = Some(Failure::BadWitness(e));
                    return;
                }
            }
        }
    }
    for (xi, yi, u, w) in &space.parallel {
        v.parallel_checked += 1;
        let (ku, kw) = (sys.kmorphism(u), sys.kmorphism(w));
        let Some(cone) = sys.fork_cone(&kc[*xi], &kc[*yi], &ku, &kw) else {
            v.failure = Some(Failure::NoFork {
                src: space.complexes[*xi].clone(),
                dst: space.complexes[*yi].clone(),
                u: u.clone(),
                v: w.clone(),
            });
            return;
        };
        let leg = &cone.legs[0];
        let equalizes = compose(leg, &ku) == compose(leg, &kw);
        if !equalizes {
            v.failure = Some(Failure::BadWitness(format!("fork legs disagree for {}", u.render(sys.base()))));
            return;
        }
        match verify_cone(sys, &[&space.complexes[*xi]], &cone) {
            Ok(Some(text)) => {
                if v.witnesses.len() < 2 {
                    v.witnesses.push(format!("fork {text}"));
                }
            }
            Ok(None) => v.beyond_bound += 1,
            Err(e) => {
                v.failure = Some(Failure::BadWitness(e));
                return;
            }
        }
    }
    if v.beyond_bound > 0 {
        v.warnings.push(format!(
            "{} witnesses have objects larger than the bound; they were checked on carriers",
            v.beyond_bound
        ));
    }
}

fn compose(g: &KMap, f: &KMap) -> KMap {
    crate::builtin::kchain::compose_kmaps(g, f)
}

/// Checks a carrier-built cone, then, when its vertex fits the bound, the same
/// cone as complex morphisms through the module's square checks. Returns the
/// rendered vertex, `None` if beyond the bound.
pub fn verify_cone(sys: &System, sources: &[&TruncatedComplex], cone: &KCone) -> std::result::Result<Option<String>, String> {
    let ks: Vec<KChain> = sources.iter().map(|c| sys.kchain(c)).collect();
    let refs: Vec<&KChain> = ks.iter().collect();
    if !sys.is_kcone(&refs, cone) {
        return Err("carrier squares do not commute".into());
    }
    let Some((vertex, isos)) = sys.complex_of(&cone.vertex) else {
        return Ok(None);
    };
    for (s, leg) in sources.iter().zip(&cone.legs) {
        let relabeled = crate::builtin::kchain::compose_kmaps(&isos, leg);
        let f = sys
            .morphism_of(&vertex, s, &relabeled)
            .ok_or_else(|| "leg is not a base morphism".to_string())?;
        if !is_complex_morphism(sys, &vertex, s, &f) {
            return Err(format!("leg {} fails the square checks", f.render(sys.base())));
        }
    }
    Ok(Some(vertex.render(sys)))
}

/// The Weak Solvability Condition at depth `n`, checked at the heads.
pub fn check_weak(m: &dyn Module, n: usize, opts: &Options, budget: &Budget) -> Result<Verdict> {
    let mut v = Verdict::new("WSC", m, n);
    let c = m.base();
    if c.num_objects() == 0 {
        v.failure = Some(Failure::Empty);
        return Ok(v);
    }
    let space = test_space(m, n, 0, opts, budget)?;
    v.exhaustive = space.exhaustive;
    if !space.exhaustive {
        v.warnings.push(format!(
            "parallel pairs drawn from a seeded sample of {} complexes; head spans checked for all heads",
            space.complexes.len()
        ));
    }
    if space.complexes.is_empty() {
        v.failure = Some(Failure::Empty);
        return Ok(v);
    }
    let mut heads: Vec<Obj> = if space.exhaustive {
        space.complexes.iter().map(|x| x.head()).collect()
    } else {
        c.objects().filter(|&a| count_complexes(m, n, Some(a)) > 0).collect()
    };
    heads.sort();
    heads.dedup();
    for (i, &a) in heads.iter().enumerate() {
        for &b in &heads[i..] {
            v.pairs_checked += 1;
            if find_span(c, a, b).is_none() {
                v.failure = Some(Failure::NoHeadSpan { left: a, right: b });
                return Ok(v);
            }
        }
    }
    let mut seen = HashSet::new();
    for (_, _, u, w) in &space.parallel {
        let (u0, w0) = (u.comps[0], w.comps[0]);
        if u0 == w0 || !seen.insert((u0.min(w0), u0.max(w0))) {
            continue;
        }
        v.parallel_checked += 1;
        if find_fork(c, u0, w0).is_none() {
            v.failure = Some(Failure::NoHeadFork { u: u0, v: w0 });
            return Ok(v);
        }
    }
    Ok(v)
}

/// A cone built by descent, as complex data when within the bound.
#[derive(Clone, Debug)]
pub enum Built {
    Complex { vertex: TruncatedComplex, legs: Vec<ComplexMorphism> },
    Carrier(KCone),
}

#[derive(Clone, Debug, Default)]
pub struct Propagation {
    pub spans: Vec<Built>,
    pub forks: Vec<Built>,
}

/// Builds a cone in `Complex_n` for every tested pair and parallel pair: a
/// span or fork of the deepest objects in the base, then flatness of the
/// partial modules level by level up to the head.
pub fn propagate_weak(m: &dyn Module, n: usize, opts: &Options, budget: &Budget) -> Result<Propagation> {
    let space = test_space(m, n, opts.lookahead, opts, budget)?;
    let mut out = Propagation::default();
    if let Some(sys) = m.concrete() {
        let kc: Vec<KChain> = space.complexes.iter().map(|c| sys.kchain(c)).collect();
        for i in 0..kc.len() {
            for j in i..kc.len() {
                let cone = sys.span_cone(&kc[i], &kc[j]);
                out.spans.push(as_built(sys, &[&space.complexes[i], &space.complexes[j]], cone));
            }
        }
        for (xi, yi, u, w) in &space.parallel {
            let cone = sys
                .fork_cone(&kc[*xi], &kc[*yi], &sys.kmorphism(u), &sys.kmorphism(w))
                .ok_or_else(|| Error::FlatnessFailure {
                    object: sys.base().obj_name(space.complexes[*xi].obj(n)).to_string(),
                    stage: n,
                    detail: "deepest objects admit no fork".into(),
                })?;
            out.forks.push(as_built(sys, &[&space.complexes[*xi]], cone));
        }
        return Ok(out);
    }
    for i in 0..space.complexes.len() {
        for j in i..space.complexes.len() {
            let (vertex, legs) = descend_span(m, &space.complexes[i], &space.complexes[j])?;
            out.spans.push(Built::Complex { vertex, legs });
        }
    }
    for (xi, _, u, w) in &space.parallel {
        let (vertex, leg) = descend_fork(m, &space.complexes[*xi], u, w)?;
        out.forks.push(Built::Complex { vertex, legs: vec![leg] });
    }
    Ok(out)
}

fn as_built(sys: &System, sources: &[&TruncatedComplex], cone: KCone) -> Built {
    match sys.complex_of(&cone.vertex) {
        Some((vertex, isos)) => {
            let legs = sources
                .iter()
                .zip(&cone.legs)
                .map(|(s, l)| {
                    sys.morphism_of(&vertex, s, &crate::builtin::kchain::compose_kmaps(&isos, l))
                        .expect("relabeled legs are base morphisms")
                })
                .collect();
            Built::Complex { vertex, legs }
        }
        None => Built::Carrier(cone),
    }
}

/// Span in the category of elements of `M(e,-)` over `x` and `y`.
pub fn element_span(m: &dyn Module, e: Obj, x: Elem, y: Elem) -> Option<(Elem, Mor, Mor)> {
    let c = m.base();
    for w in elems_from(m, e) {
        let h = c.hom(w.dst, x.dst).iter().find(|&&h| m.ract(h, w) == x);
        let k = c.hom(w.dst, y.dst).iter().find(|&&k| m.ract(k, w) == y);
        if let (Some(&h), Some(&k)) = (h, k) {
            return Some((w, h, k));
        }
    }
    None
}

/// Fork in the category of elements of `M(x.src,-)` for `u, v` out of `x`.
pub fn element_fork(m: &dyn Module, x: Elem, u: Mor, v: Mor) -> Option<(Elem, Mor)> {
    let c = m.base();
    for w in elems_from(m, x.src) {
        for &h in c.hom(w.dst, x.dst) {
            if m.ract(h, w) == x && c.compose(u, h) == c.compose(v, h) {
                return Some((w, h));
            }
        }
    }
    None
}

fn flat_err(m: &dyn Module, a: Obj, stage: usize, detail: &str) -> Error {
    Error::FlatnessFailure { object: m.base().obj_name(a).to_string(), stage, detail: detail.to_string() }
}

pub fn descend_span(m: &dyn Module, x: &TruncatedComplex, y: &TruncatedComplex) -> Result<(TruncatedComplex, Vec<ComplexMorphism>)> {
    let c = m.base();
    let n = x.depth();
    let (f, g) = find_span(c, x.obj(n), y.obj(n)).ok_or_else(|| flat_err(m, x.obj(n), n, "deepest objects have no span"))?;
    let mut objs = vec![c.src(f)];
    let mut maps = Vec::new();
    let (mut fs, mut gs) = (vec![f], vec![g]);
    for i in (1..=n).rev() {
        let (fi, gi) = (*fs.last().expect("built"), *gs.last().expect("built"));
        let e = c.src(fi);
        let xe = m.lact(x.arrow(i), fi);
        let ye = m.lact(y.arrow(i), gi);
        let (w, h, k) = element_span(m, e, xe, ye).ok_or_else(|| flat_err(m, e, i, "no span in the category of elements"))?;
        objs.push(w.dst);
        maps.push(w);
        fs.push(h);
        gs.push(k);
    }
    objs.reverse();
    maps.reverse();
    fs.reverse();
    gs.reverse();
    Ok((TruncatedComplex { objs, maps }, vec![ComplexMorphism { comps: fs }, ComplexMorphism { comps: gs }]))
}

pub fn descend_fork(m: &dyn Module, x: &TruncatedComplex, u: &ComplexMorphism, v: &ComplexMorphism) -> Result<(TruncatedComplex, ComplexMorphism)> {
    let c = m.base();
    let n = x.depth();
    let w = find_fork(c, u.comps[n], v.comps[n]).ok_or_else(|| flat_err(m, x.obj(n), n, "deepest components have no fork"))?;
    let mut objs = vec![c.src(w)];
    let mut maps = Vec::new();
    let mut ws = vec![w];
    for i in (1..=n).rev() {
        let wi = *ws.last().expect("built");
        let xe = m.lact(x.arrow(i), wi);
        let (z, h) = element_fork(m, xe, u.comps[i - 1], v.comps[i - 1])
            .ok_or_else(|| flat_err(m, xe.src, i, "no fork in the category of elements"))?;
        objs.push(z.dst);
        maps.push(z);
        ws.push(h);
    }
    objs.reverse();
    maps.reverse();
    ws.reverse();
    Ok((TruncatedComplex { objs, maps }, ComplexMorphism { comps: ws }))
}
