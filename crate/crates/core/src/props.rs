//! Seeded random instances and the property checks run over them.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::builtin::System;
use crate::complexes::{enumerate_complexes, enumerate_morphisms, is_complex_morphism, ComplexMorphism, LazyComplex, TruncatedComplex};
use crate::error::Error;
use crate::fincat::{validate_category, Category, CategoryBuilder, FinCategory, FinPreorder, MonotoneMap, Mor, Obj};
use crate::module::{elems, flat_check, tensor, CoendPair, CoendTable, IdentityModule, Module, Partial, SetFunctor, TableModule};
use crate::solvability::{
    check_compact, check_koenig_conditions, kcone_of, koenig_powerset_oracle, thread, weak_to_strong, Diagram, PreorderChain,
};

/// A random concrete category: a few small finite sets and the maps generated
/// by a few random functions under composition.
pub fn random_category(rng: &mut ChaCha8Rng, name: &str) -> FinCategory {
    loop {
        let k = rng.gen_range(2..=4);
        let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let mut maps: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for _ in 0..rng.gen_range(2..=4) {
            let (s, t) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let f: Vec<usize> = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t])).collect();
            let identity = s == t && f.iter().enumerate().all(|(i, &y)| i == y);
            if !identity && !maps.contains(&(s, t, f.clone())) {
                maps.push((s, t, f));
            }
        }
        // close under composition, identities left implicit
        let mut grew = true;
        while grew && maps.len() <= 30 {
            grew = false;
            for i in 0..maps.len() {
                for j in 0..maps.len() {
                    let (fs, ft, f) = maps[j].clone();
                    let (gs, gt, g) = maps[i].clone();
                    if ft != gs {
                        continue;
                    }
                    let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                    let identity = fs == gt && h.iter().enumerate().all(|(i, &y)| i == y);
                    if !identity && !maps.contains(&(fs, gt, h.clone())) {
                        maps.push((fs, gt, h));
                        grew = true;
                    }
                }
            }
        }
        if maps.len() > 30 {
            continue;
        }
        let mut b = CategoryBuilder::new(name);
        let objs: Vec<Obj> = (0..k).map(|i| b.object(&format!("x{i}")).expect("fresh")).collect();
        let mors: Vec<Mor> = maps
            .iter()
            .enumerate()
            .map(|(i, (s, t, _))| b.morphism(&format!("f{i}"), objs[*s], objs[*t]).expect("fresh"))
            .collect();
        for (i, (gs, gt, g)) in maps.iter().enumerate() {
            for (j, (fs, ft, f)) in maps.iter().enumerate() {
                if ft != gs {
                    continue;
                }
                let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                match maps.iter().position(|m| *m == (*fs, *gt, h.clone())) {
                    Some(p) => b.compose(mors[i], mors[j], mors[p]),
                    None => b.compose_to_identity(mors[i], mors[j]),
                }
            }
        }
        return b.build();
    }
}

/// A functor `c → c` as object and morphism maps.
#[derive(Clone, Debug)]
pub struct Endo {
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Endo {
    pub fn identity(c: &FinCategory) -> Self {
        Endo { obj: c.objects().collect(), mor: c.morphisms().collect() }
    }

    pub fn constant(c: &FinCategory, a: Obj) -> Self {
        Endo { obj: vec![a; c.num_objects()], mor: vec![c.identity(a); c.num_morphisms()] }
    }

    /// Identities go to identities and every composite is preserved.
    pub fn is_functor(&self, c: &FinCategory) -> bool {
        c.objects().all(|a| self.mor[c.identity(a).idx()] == c.identity(self.obj[a.idx()]))
            && c.morphisms().all(|f| {
                let g = self.mor[f.idx()];
                c.src(g) == self.obj[c.src(f).idx()] && c.dst(g) == self.obj[c.dst(f).idx()]
            })
            && c.morphisms().all(|f| {
                c.morphisms().all(|g| match c.try_compose(g, f) {
                    Some(h) => c.compose(self.mor[g.idx()], self.mor[f.idx()]) == self.mor[h.idx()],
                    None => true,
                })
            })
    }
}

/// A random endofunctor found by randomized backtracking; the constant functor
/// on a random object when the search gives up.
pub fn random_endofunctor(rng: &mut ChaCha8Rng, c: &FinCategory) -> Endo {
    for _ in 0..20 {
        let obj: Vec<Obj> = c.objects().map(|_| Obj(rng.gen_range(0..c.num_objects() as u32))).collect();
        let mut mor = vec![None; c.num_morphisms()];
        for a in c.objects() {
            mor[c.identity(a).idx()] = Some(c.identity(obj[a.idx()]));
        }
        let order: Vec<Mor> = c.morphisms().filter(|f| mor[f.idx()].is_none()).collect();
        let mut steps = 0;
        if assign(c, &obj, &order, 0, &mut mor, rng, &mut steps) {
            let e = Endo { obj, mor: mor.into_iter().map(|m| m.expect("assigned")).collect() };
            debug_assert!(e.is_functor(c));
            return e;
        }
    }
    let a = Obj(rng.gen_range(0..c.num_objects() as u32));
    Endo::constant(c, a)
}

fn assign(
    c: &FinCategory,
    obj: &[Obj],
    order: &[Mor],
    i: usize,
    mor: &mut Vec<Option<Mor>>,
    rng: &mut ChaCha8Rng,
    steps: &mut usize,
) -> bool {
    *steps += 1;
    if *steps > 2000 {
        return false;
    }
    let Some(&f) = order.get(i) else { return true };
    let mut cands = c.hom(obj[c.src(f).idx()], obj[c.dst(f).idx()]).to_vec();
    cands.shuffle(rng);
    for g in cands {
        mor[f.idx()] = Some(g);
        if consistent(c, mor) && assign(c, obj, order, i + 1, mor, rng, steps) {
            return true;
        }
    }
    mor[f.idx()] = None;
    false
}

fn consistent(c: &FinCategory, mor: &[Option<Mor>]) -> bool {
    c.morphisms().all(|f| {
        c.morphisms().all(|g| match (c.try_compose(g, f), mor[f.idx()], mor[g.idx()]) {
            (Some(h), Some(ff), Some(gg)) => mor[h.idx()].is_none_or(|hh| c.compose(gg, ff) == hh),
            _ => true,
        })
    })
}

/// The module `M(a,b) = A(Ga, Hb)` with `m@f = m∘G(f)` and `g@m = H(g)∘m`.
pub fn along(base: Arc<FinCategory>, g: &Endo, h: &Endo, name: &str) -> TableModule {
    let c = base.clone();
    let mut t = TableModule::new(name, base);
    let mut elem: HashMap<(Obj, Obj, Mor), crate::module::Elem> = HashMap::new();
    for a in c.objects() {
        for b in c.objects() {
            for &m in c.hom(g.obj[a.idx()], h.obj[b.idx()]) {
                let e = t.add_element(&format!("{}|{}|{}", c.obj_name(a), c.obj_name(b), c.mor_name(m)), a, b);
                elem.insert((a, b, m), e);
            }
        }
    }
    for (&(a, b, m), &e) in &elem {
        for x in c.objects() {
            for &f in c.hom(x, a) {
                t.set_lact(e, f, elem[&(x, b, c.compose(m, g.mor[f.idx()]))]);
            }
            for &k in c.hom(b, x) {
                t.set_ract(k, e, elem[&(a, x, c.compose(h.mor[k.idx()], m))]);
            }
        }
    }
    t
}

fn is_flat(m: &dyn Module) -> bool {
    m.base().objects().all(|a| flat_check(m, a).holds())
}

#[derive(Clone, Debug, Default)]
pub struct FlatnessReport {
    pub categories: usize,
    pub identity_checks: usize,
    /// Flat modules found among the random candidates.
    pub flat_inputs: usize,
    pub tensors: usize,
    pub failures: Vec<String>,
}

impl FlatnessReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Identity modules of random categories are flat, and so are tensors of
/// random flat modules over them.
pub fn flatness_theorems(seed: u64, categories: usize, candidates: usize) -> FlatnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = FlatnessReport::default();
    for k in 0..categories {
        let c = Arc::new(random_category(&mut rng, &format!("c{k}")));
        if let Some(v) = validate_category(&c).first() {
            r.failures.push(format!("category c{k} is invalid: {v}"));
            continue;
        }
        r.categories += 1;
        let id = IdentityModule::new(c.clone());
        for a in c.objects() {
            r.identity_checks += 1;
            let v = flat_check(&id, a);
            if !v.holds() {
                r.failures.push(format!("identity of c{k} at {}: {}", c.obj_name(a), v.describe(&id)));
            }
        }
        let mut flat: Vec<TableModule> = Vec::new();
        for i in 0..candidates {
            let g = random_endofunctor(&mut rng, &c);
            let h = if rng.gen_bool(0.5) { Endo::identity(&c) } else { random_endofunctor(&mut rng, &c) };
            let m = along(c.clone(), &g, &h, &format!("M{i}"));
            if is_flat(&m) {
                flat.push(m);
            }
        }
        r.flat_inputs += flat.len();
        for (i, n) in flat.iter().enumerate() {
            for m in flat.iter().skip(i) {
                r.tensors += 1;
                let t = tensor(n, m, c.clone()).module;
                for a in c.objects() {
                    let v = flat_check(&t, a);
                    if !v.holds() {
                        r.failures.push(format!("{} over c{k} at {}: {}", t.name(), c.obj_name(a), v.describe(&t)));
                    }
                }
            }
        }
    }
    r
}

/// Coend classes by a naive reflexive-symmetric-transitive closure of the
/// generating relation, as a class index per pair of `pairs`.
pub fn naive_coend_partition(m: &dyn Module, x: &dyn SetFunctor, pairs: &[CoendPair]) -> Vec<usize> {
    let c = m.base();
    let n = pairs.len();
    let pos: HashMap<CoendPair, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut rel = vec![false; n * n];
    for i in 0..n {
        rel[i * n + i] = true;
    }
    for (i, p) in pairs.iter().enumerate() {
        for a2 in c.objects() {
            for &f in c.hom(a2, p.m.src) {
                for xi in 0..x.size(a2) {
                    if x.act(f, xi) == p.x {
                        let j = pos[&CoendPair { m: m.lact(p.m, f), x: xi }];
                        rel[i * n + j] = true;
                        rel[j * n + i] = true;
                    }
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i * n + k] {
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
    }
    (0..n).map(|i| (0..n).find(|&j| rel[i * n + j]).expect("reflexive")).collect()
}

/// Two class assignments describe the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut ab: HashMap<usize, usize> = HashMap::new();
    let mut ba: HashMap<usize, usize> = HashMap::new();
    a.len() == b.len()
        && a.iter().zip(b).all(|(&x, &y)| *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}

#[derive(Clone, Debug, Default)]
pub struct CoendReport {
    pub instances: usize,
    pub max_pairs: usize,
    pub total_pairs: usize,
    pub total_classes: usize,
    pub failures: Vec<String>,
}

impl CoendReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The union-find coend agrees with the naive closure on random modules and
/// functors, each instance with between `min_pairs` and `max_pairs` pairs.
pub fn coend_agreement(seed: u64, instances: usize, min_pairs: usize, max_pairs: usize) -> CoendReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = CoendReport::default();
    while r.instances < instances {
        let c = Arc::new(random_category(&mut rng, "c"));
        let (g, h) = (random_endofunctor(&mut rng, &c), random_endofunctor(&mut rng, &c));
        let m = along(c.clone(), &g, &h, "M");
        let (g2, h2) = (random_endofunctor(&mut rng, &c), random_endofunctor(&mut rng, &c));
        let xm = along(c.clone(), &g2, &h2, "X");
        let a = Obj(rng.gen_range(0..c.num_objects() as u32));
        let at = Obj(rng.gen_range(0..c.num_objects() as u32));
        let x = Partial { module: &xm, a };
        let t = CoendTable::build(&m, &x, at);
        if t.num_pairs() < min_pairs.max(1) || t.num_pairs() > max_pairs {
            continue;
        }
        r.instances += 1;
        r.max_pairs = r.max_pairs.max(t.num_pairs());
        r.total_pairs += t.num_pairs();
        r.total_classes += t.num_classes();
        let fast: Vec<usize> = t.pairs().iter().map(|&p| t.class(p).expect("own pair")).collect();
        let slow = naive_coend_partition(&m, &x, t.pairs());
        if !same_partition(&fast, &slow) {
            r.failures.push(format!("instance {}: partitions differ on {} pairs", r.instances, t.num_pairs()));
        }
        // representatives lie in their own classes
        for k in 0..t.num_classes() {
            if t.class(t.rep(k)) != Some(k) {
                r.failures.push(format!("instance {}: representative of class {k} is elsewhere", r.instances));
            }
        }
    }
    r
}

/// A random preorder: a random relation closed reflexively and transitively.
pub fn random_preorder(rng: &mut ChaCha8Rng, n: usize) -> FinPreorder {
    let density = rng.gen_range(0.0..0.4);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|_| rng.gen_bool(density)).collect();
    FinPreorder::from_relation((0..n).map(|i| format!("p{i}")).collect(), &pairs)
}

/// A random monotone map, found by rejection with a constant-map fallback.
pub fn random_monotone(rng: &mut ChaCha8Rng, src: &FinPreorder, dst: &FinPreorder) -> MonotoneMap {
    for _ in 0..200 {
        let f = MonotoneMap { map: (0..src.len()).map(|_| rng.gen_range(0..dst.len())).collect() };
        if f.is_monotone(src, dst).is_none() {
            return f;
        }
    }
    MonotoneMap { map: vec![rng.gen_range(0..dst.len()); src.len()] }
}

pub fn random_chain(rng: &mut ChaCha8Rng, depth: usize, max_points: usize) -> PreorderChain {
    let levels: Vec<FinPreorder> = (0..=depth)
        .map(|_| {
            let k = rng.gen_range(1..=max_points);
            random_preorder(rng, k)
        })
        .collect();
    let maps = (0..depth).map(|n| random_monotone(rng, &levels[n + 1], &levels[n])).collect();
    PreorderChain { levels, maps }
}

/// Indiscrete levels with surjective maps, so both conditions hold.
pub fn passing_chain(rng: &mut ChaCha8Rng, depth: usize) -> PreorderChain {
    let mut sizes = vec![1usize];
    for _ in 0..depth {
        let last = *sizes.last().expect("nonempty");
        sizes.push((last + rng.gen_range(0..=1)).min(5));
    }
    let levels = sizes.iter().map(|&k| FinPreorder::anonymous(k, |_, _| true)).collect();
    let maps = (0..depth)
        .map(|n| {
            let (up, low) = (sizes[n + 1], sizes[n]);
            MonotoneMap { map: (0..up).map(|p| if p < low { p } else { rng.gen_range(0..low) }).collect() }
        })
        .collect();
    PreorderChain { levels, maps }
}

#[derive(Clone, Debug, Default)]
pub struct KoenigReport {
    pub trials: usize,
    /// Trials where the conditions held.
    pub passing: usize,
    pub failures: Vec<String>,
}

impl KoenigReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The principal-upset checker agrees with the powerset oracle on random
/// one-step chains with up to `max_points` points per level.
pub fn koenig_agreement(seed: u64, trials: usize, max_points: usize) -> KoenigReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = KoenigReport { trials, ..Default::default() };
    for t in 0..trials {
        let ch = random_chain(&mut rng, 1, max_points);
        let fast = check_koenig_conditions(&ch).holds();
        r.passing += usize::from(fast);
        if fast != koenig_powerset_oracle(&ch) {
            r.failures.push(format!("trial {t}: checker says {fast}, oracle disagrees"));
        }
    }
    r
}

#[derive(Clone, Debug, Default)]
pub struct ThreadReport {
    pub trials: usize,
    pub passing: usize,
    pub threaded: usize,
    pub empty: usize,
    pub failures: Vec<String>,
}

impl ThreadReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `thread` succeeds on every condition-passing chain and fails with
/// `EmptyLevel` exactly on chains with an empty level.
pub fn thread_trials(seed: u64, trials: usize, depth: usize) -> ThreadReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ThreadReport { trials, ..Default::default() };
    for t in 0..trials {
        let mut ch = if t % 2 == 1 { passing_chain(&mut rng, depth) } else { random_chain(&mut rng, depth, 5) };
        let hole = (t % 4 == 0).then(|| rng.gen_range(0..=depth));
        if let Some(k) = hole {
            // no map can land in an empty level, so everything above it is empty too
            for j in k..=depth {
                ch.levels[j] = FinPreorder::anonymous(0, |_, _| false);
                if j > 0 {
                    ch.maps[j - 1].map.clear();
                }
            }
        }
        let holds = check_koenig_conditions(&ch).holds();
        r.passing += usize::from(holds);
        let first_empty = ch.levels.iter().position(FinPreorder::is_empty);
        match (thread(&ch, depth), first_empty) {
            (Ok(th), None) => {
                r.threaded += 1;
                if (0..depth).any(|n| ch.maps[n].map[th[n + 1]] != th[n]) {
                    r.failures.push(format!("trial {t}: the thread is not compatible"));
                }
            }
            (Ok(_), Some(k)) => r.failures.push(format!("trial {t}: threaded through empty level {k}")),
            (Err(Error::EmptyLevel(k)), Some(e)) if k == e => r.empty += 1,
            (Err(e), _) if holds => r.failures.push(format!("trial {t}: conditions hold but {e}")),
            (Err(_), None) => {}
            (Err(e), Some(k)) => r.failures.push(format!("trial {t}: empty level {k}, got {e}")),
        }
    }
    r
}

/// A lazy complex agreeing with `c` up to its depth.
pub fn frozen(m: Arc<dyn Module>, c: &TruncatedComplex) -> LazyComplex {
    LazyComplex::with_prefix(c, move |a, s| {
        let e = m.base().objects().flat_map(|b| elems(m.as_ref(), b, a)).next().expect("some arrow");
        (e, s + 1)
    })
}

enum Shape {
    Pair(TruncatedComplex, TruncatedComplex),
    Parallel(TruncatedComplex, TruncatedComplex, ComplexMorphism, ComplexMorphism),
}

fn random_shape(s: &System, rng: &mut ChaCha8Rng, n: usize) -> Shape {
    let cs = enumerate_complexes(s, n, None, &Budget::unlimited()).expect("small");
    if rng.gen_bool(0.5) {
        return Shape::Pair(cs.choose(rng).expect("some").clone(), cs.choose(rng).expect("some").clone());
    }
    loop {
        let (x, y) = (cs.choose(rng).expect("some"), cs.choose(rng).expect("some"));
        let ms = enumerate_morphisms(s, x, y);
        if ms.len() >= 2 {
            let i = rng.gen_range(0..ms.len());
            let j = (i + rng.gen_range(1..ms.len())) % ms.len();
            return Shape::Parallel(x.clone(), y.clone(), ms[i].clone(), ms[j].clone());
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct PropagationReport {
    /// Diagrams whose cones fit the bound and were checked.
    pub accepted: usize,
    /// Diagrams whose cones exist only beyond the bound.
    pub outside: usize,
    pub pairs: usize,
    pub parallel: usize,
    pub failures: Vec<String>,
}

impl PropagationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random pair and parallel-pair diagrams of depth at most 3: each cone from
/// `weak_to_strong` passes the square checks and is zig-zag connected to the
/// witness built by the strong check through the limit cone. Stops once
/// `wanted` diagrams are accepted or after `4 * wanted` draws.
pub fn propagation_trials(owned: &Arc<System>, seed: u64, wanted: usize) -> PropagationReport {
    let mut r = PropagationReport::default();
    for seed in seed..seed + 4 * wanted as u64 {
        if r.accepted == wanted {
            break;
        }
        if let Err(e) = propagation_trial(owned, seed, &mut r) {
            r.failures.push(format!("seed {seed}: {e}"));
        }
    }
    if r.accepted < wanted {
        r.failures.push(format!("only {} of {wanted} diagrams met the precondition", r.accepted));
    }
    r
}

fn propagation_trial(owned: &Arc<System>, seed: u64, r: &mut PropagationReport) -> std::result::Result<(), String> {
    let s = &**owned;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let arc: Arc<dyn Module> = owned.clone();
    let shape = random_shape(s, &mut rng, n);
    let d = match &shape {
        Shape::Pair(x, y) => Diagram::discrete(vec![frozen(arc.clone(), x), frozen(arc.clone(), y)]),
        Shape::Parallel(x, y, u, v) => Diagram {
            nodes: vec![frozen(arc.clone(), x), frozen(arc.clone(), y)],
            arrows: vec![(0, 1, u.clone()), (0, 1, v.clone())],
        },
    };
    let b = Budget::unlimited();
    let got = match weak_to_strong(s, &d, n, &b) {
        Ok(g) => g,
        Err(Error::EmptyLevel(k)) => {
            // outside the precondition: no cone fits the bound, though one exists on carriers
            let compact = check_compact(s, &d, n, 0, &b).map_err(|e| e.to_string())?;
            if compact.empty_level != Some(k) {
                return Err(format!("empty level {k} not confirmed by the compactness check"));
            }
            let witness = match &shape {
                Shape::Pair(x, y) => s.span_cone(&s.kchain(x), &s.kchain(y)),
                Shape::Parallel(x, y, u, v) => s
                    .fork_cone(&s.kchain(x), &s.kchain(y), &s.kmorphism(u), &s.kmorphism(v))
                    .ok_or("no fork on carriers")?,
            };
            if witness.vertex.max_size() <= s.bound {
                return Err("a cone within the bound was missed".into());
            }
            r.outside += 1;
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    let (nodes, arrows) = d.at(n);
    for (l, x) in got.cone.legs.iter().zip(&nodes) {
        if !is_complex_morphism(s, &got.cone.vertex, x, l) {
            return Err("a leg fails the square checks".into());
        }
    }
    for (i, j, f) in &arrows {
        if ComplexMorphism::compose(s.base(), f, &got.cone.legs[*i]) != got.cone.legs[*j] {
            return Err("the cone does not commute with the diagram".into());
        }
    }
    let ours = kcone_of(s, &got.cone);
    match &shape {
        Shape::Pair(x, y) => {
            r.pairs += 1;
            let (kx, ky) = (s.kchain(x), s.kchain(y));
            let witness = s.span_cone(&kx, &ky);
            let limit = s.coproduct_cone(&kx, &ky).ok_or("no coproduct of carriers")?;
            if s.factor_through(&limit, &ours).is_none() || s.factor_through(&limit, &witness).is_none() {
                return Err("not connected to the span witness".into());
            }
        }
        Shape::Parallel(x, y, u, v) => {
            r.parallel += 1;
            let (kx, ky) = (s.kchain(x), s.kchain(y));
            let (ku, kv) = (s.kmorphism(u), s.kmorphism(v));
            let witness = s.fork_cone(&kx, &ky, &ku, &kv).ok_or("no fork on carriers")?;
            let limit = s.coequalizer_cone(&kx, &ky, &ku, &kv).ok_or("no levelwise coequalizer")?;
            let ours_x = crate::builtin::KCone { vertex: ours.vertex.clone(), legs: vec![ours.legs[0].clone()] };
            if s.factor_through(&limit, &ours_x).is_none() || s.factor_through(&limit, &witness).is_none() {
                return Err("not connected to the fork witness".into());
            }
        }
    }
    r.accepted += 1;
    Ok(())
}
