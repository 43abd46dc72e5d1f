//! Depth-`n` approximations `I_n` of the final coalgebra, their refinement
//! maps, the structure map `ι_n: I_n → M ⊗ I_{n-1}` and solutions of
//! coalgebras via resolutions.
//!
//! An element of `I_n(b)` is a class of pairs `(C, g)` of a depth-`n` complex
//! and `g: head(C) → b`; a complex morphism `f: C' → C` identifies `(C, g)`
//! with `(C', g·f_0)`. Builtins work on pairs generated by the anchor, which
//! meet every class (see `builtin::reduce`); other modules enumerate all pairs.

use std::collections::{BTreeMap, HashMap};

use crate::budget::Budget;
use crate::complexes::{enumerate_complexes, enumerate_morphisms, resolution_at, TruncatedComplex};
use crate::error::{Error, Result};
use crate::fincat::{is_cofiltered, Category, Mor, Obj};
use crate::module::{elems, Coalgebra, Elem, Module, SetFunctor};
use crate::union_find::UnionFind;

pub const NECESSITY_WARNING: &str =
    "identity module over a non-cofiltered base: the category A must be cofiltered for the final coalgebra to be computed by complexes";

/// One zig-zag class with its deterministic representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagClass {
    pub level: usize,
    pub anchor: Obj,
    pub rep: TruncatedComplex,
    pub head_map: Mor,
    pub id: usize,
}

impl ZigzagClass {
    pub fn render(&self, m: &dyn Module) -> String {
        let c = m.base();
        format!(
            "class {} @ {} : rep = {} ; head-map = {}",
            self.id,
            c.obj_name(self.anchor),
            self.rep.render(m),
            c.mor_name(self.head_map)
        )
    }
}

type Pair = (TruncatedComplex, Mor);

/// Classes of `I_n(b)` at one anchor.
#[derive(Clone, Debug)]
pub struct AnchorClasses {
    pub anchor: Obj,
    pairs: Vec<Pair>,
    index: HashMap<Pair, usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl AnchorClasses {
    fn from_partition(anchor: Obj, pairs: Vec<Pair>, uf: &mut UnionFind) -> Self {
        let (class_of, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (i, &k) in class_of.iter().enumerate() {
            if reps[k] == usize::MAX {
                reps[k] = i;
            }
        }
        let index = pairs.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        AnchorClasses { anchor, pairs, index, class_of, reps }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Class of each pair, in pair order.
    pub fn partition(&self) -> &[usize] {
        &self.class_of
    }

    pub fn rep(&self, k: usize) -> &Pair {
        &self.pairs[self.reps[k]]
    }

    pub fn members(&self, k: usize) -> impl Iterator<Item = &Pair> {
        self.pairs.iter().zip(&self.class_of).filter(move |(_, &c)| c == k).map(|(p, _)| p)
    }
}

/// `I_n` at a set of anchors.
#[derive(Clone, Debug)]
pub struct ColimitApprox {
    pub level: usize,
    /// Whether classes are computed on anchor-generated pairs.
    pub reduced: bool,
    pub anchors: BTreeMap<Obj, AnchorClasses>,
    pub warnings: Vec<String>,
}

impl ColimitApprox {
    pub fn at(&self, b: Obj) -> Result<&AnchorClasses> {
        self.anchors
            .get(&b)
            .ok_or_else(|| Error::Invalid(format!("object #{} is not an anchor of this approximation", b.0)))
    }

    pub fn num_classes(&self, b: Obj) -> usize {
        self.anchors.get(&b).map_or(0, |a| a.num_classes())
    }

    pub fn classes(&self, b: Obj) -> Vec<ZigzagClass> {
        let Some(a) = self.anchors.get(&b) else { return Vec::new() };
        (0..a.num_classes())
            .map(|k| {
                let (rep, g) = a.rep(k).clone();
                ZigzagClass { level: self.level, anchor: b, rep, head_map: g, id: k }
            })
            .collect()
    }

    /// The class of `(c, g)`, anchored at `dst(g)`.
    pub fn class_of(&self, m: &dyn Module, c: &TruncatedComplex, g: Mor) -> Option<usize> {
        let a = self.anchors.get(&m.base().dst(g))?;
        let key = match (self.reduced, m.concrete()) {
            (true, Some(sys)) => sys.reduce_pair(c, g),
            _ => (c.clone(), g),
        };
        a.index.get(&key).map(|&i| a.class_of[i])
    }

    /// `I_n(h)` for `h: b → b'`: `[(C, g)] ↦ [(C, h·g)]`.
    pub fn act(&self, m: &dyn Module, h: Mor, k: usize) -> Option<usize> {
        let b = m.base().src(h);
        let (c, g) = self.anchors.get(&b)?.rep(k);
        self.class_of(m, c, m.base().compose(h, *g))
    }
}

/// Builds `I_n` at the given anchors.
pub fn build_approx(m: &dyn Module, n: usize, anchors: &[Obj], budget: &Budget) -> Result<ColimitApprox> {
    match m.concrete() {
        Some(_) => build_reduced(m, n, anchors, budget),
        None => build_full(m, n, anchors, budget),
    }
}

fn necessity(m: &dyn Module) -> Vec<String> {
    if !m.is_identity() {
        return Vec::new();
    }
    let verdict = is_cofiltered(m.base());
    if verdict.holds() {
        Vec::new()
    } else {
        vec![format!("{NECESSITY_WARNING}; blocking witness: {}", verdict.describe(m.base()))]
    }
}

/// Union-find over every pair `(C, g)`, with an edge for every complex morphism.
pub fn build_full(m: &dyn Module, n: usize, anchors: &[Obj], budget: &Budget) -> Result<ColimitApprox> {
    let c = m.base();
    let complexes = enumerate_complexes(m, n, None, budget)?;
    let mut morphs = Vec::new();
    for (i, s) in complexes.iter().enumerate() {
        for (j, t) in complexes.iter().enumerate() {
            let fs = enumerate_morphisms(m, s, t);
            budget.charge(fs.len() as u64 + 1, "enumerating complex morphisms")?;
            morphs.extend(fs.into_iter().map(|f| (i, j, f)));
        }
    }
    let mut out = BTreeMap::new();
    for &b in anchors {
        let pairs: Vec<Pair> = complexes
            .iter()
            .flat_map(|x| c.hom(x.head(), b).iter().map(move |&g| (x.clone(), g)))
            .collect();
        budget.charge(pairs.len() as u64, "enumerating anchored pairs")?;
        let index: HashMap<&Pair, usize> = pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut uf = UnionFind::new(pairs.len());
        // f: s → t relates (t, g) with (s, g·f_0)
        for (i, j, f) in &morphs {
            for &g in c.hom(complexes[*j].head(), b) {
                let p = index[&(complexes[*j].clone(), g)];
                let q = index[&(complexes[*i].clone(), c.compose(g, f.comps[0]))];
                uf.union(p, q);
            }
        }
        out.insert(b, AnchorClasses::from_partition(b, pairs, &mut uf));
    }
    Ok(ColimitApprox { level: n, reduced: false, anchors: out, warnings: necessity(m) })
}

/// Union-find over anchor-generated pairs, with an edge wherever a carrier
/// chain map fixing the anchors exists between two of them.
pub fn build_reduced(m: &dyn Module, n: usize, anchors: &[Obj], budget: &Budget) -> Result<ColimitApprox> {
    let sys = m.concrete().ok_or_else(|| Error::Invalid("generated pairs need a builtin system".into()))?;
    let mut out = BTreeMap::new();
    for &b in anchors {
        let pairs = sys.generating_pairs(b, n, budget)?;
        let mut uf = UnionFind::new(pairs.len());
        let quotients: Option<Vec<Pair>> = pairs.iter().map(|p| sys.behaviour_quotient(p)).collect();
        if let Some(qs) = quotients {
            // each pair maps onto its quotient; equal quotients share a class
            let mut first: HashMap<&Pair, usize> = HashMap::new();
            for (i, (p, q)) in pairs.iter().zip(&qs).enumerate() {
                if sys.forced_map(p, q).is_none() {
                    return Err(Error::Invalid(format!("generated pair {i} does not map onto its quotient")));
                }
                uf.union(i, *first.entry(q).or_insert(i));
            }
        } else {
            budget.charge((pairs.len() as u64).pow(2) / 2, "comparing generated pairs")?;
            for i in 0..pairs.len() {
                for j in i + 1..pairs.len() {
                    if sys.forced_map(&pairs[i], &pairs[j]).is_some() || sys.forced_map(&pairs[j], &pairs[i]).is_some() {
                        uf.union(i, j);
                    }
                }
            }
        }
        out.insert(b, AnchorClasses::from_partition(b, pairs, &mut uf));
    }
    Ok(ColimitApprox { level: n, reduced: true, anchors: out, warnings: Vec::new() })
}

/// `r_n: I_{n+1}(b) → I_n(b)` by truncating representatives.
pub fn refinement(m: &dyn Module, upper: &ColimitApprox, lower: &ColimitApprox, b: Obj) -> Result<Vec<usize>> {
    let up = upper.at(b)?;
    (0..up.num_classes())
        .map(|k| {
            let (c, g) = up.rep(k);
            let t = c.truncate(lower.level)?;
            lower
                .class_of(m, &t, *g)
                .ok_or_else(|| Error::Invalid("truncated representative has no class".into()))
        })
        .collect()
}

/// Objects whose classes the coend `(M ⊗ I_{n-1})(b)` needs.
pub fn coend_sources(m: &dyn Module, b: Obj) -> Vec<Obj> {
    match m.concrete() {
        Some(sys) => sys.generated_sources(b),
        None => m.base().objects().collect(),
    }
}

/// Classes of `(M ⊗ X)(b)` for `X = I_{n-1}`: pairs `(m, x)` identified along
/// `(m@f, x) ~ (m, X(f)x)`. Builtins keep only generating `m`.
#[derive(Clone, Debug)]
pub struct CoendClasses {
    pub anchor: Obj,
    pairs: Vec<(Elem, usize)>,
    index: HashMap<(Elem, usize), usize>,
    class_of: Vec<usize>,
    count: usize,
    reduced: bool,
}

impl CoendClasses {
    pub fn num_classes(&self) -> usize {
        self.count
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// The class of `(e, [(d, h)])` with `h: head(d) → src(e)`.
    pub fn class_of(&self, m: &dyn Module, x: &ColimitApprox, e: Elem, d: &TruncatedComplex, h: Mor) -> Option<usize> {
        let (e, h) = match (self.reduced, m.concrete()) {
            (true, Some(sys)) if !sys.is_generating(e) => {
                let (es, f) = sys.reduce_elem(e);
                (es, m.base().compose(f, h))
            }
            _ => (e, h),
        };
        let k = x.class_of(m, d, h)?;
        self.index.get(&(e, k)).map(|&i| self.class_of[i])
    }
}

pub fn build_coend(m: &dyn Module, x: &ColimitApprox, b: Obj, budget: &Budget) -> Result<CoendClasses> {
    let c = m.base();
    let reduced = x.reduced && m.concrete().is_some();
    let keep = |e: Elem| !reduced || m.concrete().is_some_and(|s| s.is_generating(e));
    let sources = coend_sources(m, b);
    let mut pairs = Vec::new();
    for &a in &sources {
        let nx = x.at(a)?.num_classes();
        for e in elems(m, a, b).filter(|&e| keep(e)) {
            pairs.extend((0..nx).map(|k| (e, k)));
        }
    }
    budget.charge(pairs.len() as u64, "enumerating coend pairs")?;
    let index: HashMap<(Elem, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for &a1 in &sources {
        let firsts: Vec<Elem> = elems(m, a1, b).filter(|&e| keep(e)).collect();
        for &a2 in &sources {
            for &f in c.hom(a2, a1) {
                budget.charge(x.num_classes(a2) as u64, "relating coend pairs")?;
                for k2 in 0..x.num_classes(a2) {
                    let Some(k1) = x.act(m, f, k2) else { continue };
                    for &e in &firsts {
                        if let Some(&lhs) = index.get(&(m.lact(e, f), k2)) {
                            uf.union(lhs, index[&(e, k1)]);
                        }
                    }
                }
            }
        }
    }
    let (class_of, count) = uf.classes();
    Ok(CoendClasses { anchor: b, pairs, index, class_of, count, reduced })
}

/// `ι_n` at one anchor with its bijectivity report.
#[derive(Clone, Debug)]
pub struct StructureMap {
    pub level: usize,
    pub anchor: Obj,
    /// Image of each class of `I_n(b)` among the coend classes.
    pub image: Vec<usize>,
    pub coend_classes: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl StructureMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// `ι_n(C, g)` as a coend class: `(g@m_1, [(tail C, id)])`.
pub fn iota_of(m: &dyn Module, lower: &ColimitApprox, coend: &CoendClasses, c: &TruncatedComplex, g: Mor) -> Option<usize> {
    let e = m.ract(g, c.arrow(1));
    let tail = c.tail();
    coend.class_of(m, lower, e, &tail, m.base().identity(tail.head()))
}

pub fn structure_map(m: &dyn Module, upper: &ColimitApprox, lower: &ColimitApprox, b: Obj, budget: &Budget) -> Result<StructureMap> {
    if upper.level == 0 || lower.level + 1 != upper.level {
        return Err(Error::Invalid("the structure map goes from level n ≥ 1 to level n-1".into()));
    }
    let coend = build_coend(m, lower, b, budget)?;
    let up = upper.at(b)?;
    let image = (0..up.num_classes())
        .map(|k| {
            let (c, g) = up.rep(k);
            iota_of(m, lower, &coend, c, *g).ok_or_else(|| Error::Invalid("coend pair missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hit = vec![0usize; coend.num_classes()];
    for &k in &image {
        hit[k] += 1;
    }
    Ok(StructureMap {
        level: upper.level,
        anchor: b,
        coend_classes: coend.num_classes(),
        injective: hit.iter().all(|&h| h <= 1),
        surjective: hit.iter().all(|&h| h >= 1),
        image,
    })
}

/// Approximations `I_0, …, I_N` with refinement maps and a stabilization report.
#[derive(Clone, Debug)]
pub struct RefinementChain {
    pub levels: Vec<ColimitApprox>,
    /// `maps[n][b] = r_n: I_{n+1}(b) → I_n(b)`.
    pub maps: Vec<BTreeMap<Obj, Vec<usize>>>,
}

impl RefinementChain {
    pub fn counts(&self, b: Obj) -> Vec<usize> {
        self.levels.iter().map(|l| l.num_classes(b)).collect()
    }

    /// Whether the last refinement map at `b` is a bijection.
    pub fn stabilized(&self, b: Obj) -> bool {
        let Some(last) = self.maps.last() else { return false };
        let r = &last[&b];
        let lower = self.levels[self.levels.len() - 2].num_classes(b);
        let mut seen = vec![false; lower];
        for &k in r {
            if seen[k] {
                return false;
            }
            seen[k] = true;
        }
        seen.iter().all(|&s| s)
    }
}

pub fn refinement_chain(m: &dyn Module, anchors: &[Obj], depth: usize, budget: &Budget) -> Result<RefinementChain> {
    let levels = (0..=depth).map(|n| build_approx(m, n, anchors, budget)).collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::new();
    for n in 0..depth {
        let mut per = BTreeMap::new();
        for &b in anchors {
            per.insert(b, refinement(m, &levels[n + 1], &levels[n], b)?);
        }
        maps.push(per);
    }
    Ok(RefinementChain { levels, maps })
}

/// `sol_n` of a coalgebra with its solution-square report.
#[derive(Clone, Debug)]
pub struct Solution {
    pub level: usize,
    /// `classes[a][x]` is `sol_n(x)` for `x ∈ X(a)`.
    pub classes: Vec<Vec<usize>>,
    /// Elements where the square fails, if any.
    pub failures: Vec<(Obj, usize)>,
    /// Number of maps `X → I_n` satisfying the square, when the carrier is small enough to search.
    pub candidates: Option<usize>,
    pub upper: ColimitApprox,
    pub lower: ColimitApprox,
}

impl Solution {
    pub fn commutes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn unique(&self) -> Option<bool> {
        self.candidates.map(|k| k == 1)
    }
}

/// Largest carrier on which candidate solutions are enumerated.
pub const UNIQUENESS_LIMIT: usize = 8;

/// Checks `sol_n` on the elements over `anchors` (default: the support of
/// the carrier). The anchors must contain `src(m)` for every `e(x) = (m, x_1)`.
pub fn solve(m: &dyn Module, e: &Coalgebra, n: usize, anchors: Option<&[Obj]>, budget: &Budget) -> Result<Solution> {
    if n == 0 {
        return Err(Error::Invalid("solutions are checked from depth 1".into()));
    }
    let c = m.base();
    let support: Vec<Obj> = match anchors {
        Some(a) => {
            let mut a = a.to_vec();
            a.sort();
            a.dedup();
            a.retain(|b| !e.carrier.values[b.idx()].is_empty());
            a
        }
        None => c.objects().filter(|a| !e.carrier.values[a.idx()].is_empty()).collect(),
    };
    for &a in &support {
        for p in &e.structure[a.idx()] {
            if support.binary_search(&p.m.src).is_err() {
                return Err(Error::Invalid(format!(
                    "anchors are not closed under the structure map: {} needs {}",
                    c.obj_name(a),
                    c.obj_name(p.m.src)
                )));
            }
        }
    }
    let mut lower_anchors = support.clone();
    for &a in &support {
        lower_anchors.extend(coend_sources(m, a));
    }
    lower_anchors.sort();
    lower_anchors.dedup();
    let upper = build_approx(m, n, &support, budget)?;
    let lower = build_approx(m, n - 1, &lower_anchors, budget)?;
    let coends: BTreeMap<Obj, CoendClasses> =
        support.iter().map(|&a| Ok((a, build_coend(m, &lower, a, budget)?))).collect::<Result<_>>()?;
    let mut classes = vec![Vec::new(); c.num_objects()];
    let mut failures = Vec::new();
    for &a in &support {
        for x in 0..e.carrier.values[a.idx()].len() {
            let (res, _) = resolution_at(e, a, x, n);
            let id = c.identity(a);
            let k = upper.class_of(m, &res, id).ok_or_else(|| Error::Invalid("resolution has no class".into()))?;
            classes[a.idx()].push(k);
            let (rep, g) = upper.at(a)?.rep(k);
            let lhs = iota_of(m, &lower, &coends[&a], rep, *g);
            let p = e.structure[a.idx()][x];
            let (res1, _) = resolution_at(e, p.m.src, p.x, n - 1);
            let rhs = coends[&a].class_of(m, &lower, p.m, &res1, c.identity(p.m.src));
            if lhs.is_none() || lhs != rhs {
                failures.push((a, x));
            }
        }
    }
    let total: usize = support.iter().map(|a| e.carrier.values[a.idx()].len()).sum();
    let candidates = if total <= UNIQUENESS_LIMIT {
        Some(count_solutions(m, e, &support, &upper, &lower, &coends, budget)?)
    } else {
        None
    };
    Ok(Solution { level: n, classes, failures, candidates, upper, lower })
}

/// Counts natural maps `σ: X → I_n` with `ι_n(σ x) = [(m, r σ x_1)]` for
/// every `x` with `e(x) = (m, x_1)`, by backtracking.
fn count_solutions(
    m: &dyn Module,
    e: &Coalgebra,
    support: &[Obj],
    upper: &ColimitApprox,
    lower: &ColimitApprox,
    coends: &BTreeMap<Obj, CoendClasses>,
    budget: &Budget,
) -> Result<usize> {
    let c = m.base();
    let elements: Vec<(Obj, usize)> =
        support.iter().flat_map(|&a| (0..e.carrier.values[a.idx()].len()).map(move |x| (a, x))).collect();
    let pos: HashMap<(Obj, usize), usize> = elements.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let anchors: Vec<Obj> = upper.anchors.keys().copied().collect();
    let refine: BTreeMap<Obj, Vec<usize>> =
        anchors.iter().map(|&a| Ok((a, refinement(m, upper, lower, a)?))).collect::<Result<_>>()?;
    // for each anchor, the classes k with ι_n(k) equal to a given coend class
    let iota: BTreeMap<Obj, Vec<Option<usize>>> = anchors
        .iter()
        .map(|&a| {
            let at = upper.at(a)?;
            let img = (0..at.num_classes()).map(|k| iota_of(m, lower, &coends[&a], &at.rep(k).0, at.rep(k).1)).collect();
            Ok((a, img))
        })
        .collect::<Result<_>>()?;
    // square constraint i ← succ(i): allowed[i][k1] = classes k of σ(i) given σ(succ i) = k1
    let mut succ = Vec::new();
    let mut target: Vec<Vec<Option<usize>>> = Vec::new();
    for &(a, x) in &elements {
        let p = e.structure[a.idx()][x];
        let a1 = p.m.src;
        succ.push(pos[&(a1, p.x)]);
        let lo = lower.at(a1)?;
        target.push(
            (0..upper.num_classes(a1))
                .map(|k1| {
                    let (d, h) = lo.rep(refine[&a1][k1]);
                    coends[&a].class_of(m, lower, p.m, d, *h)
                })
                .collect(),
        );
    }
    // naturality edges i → j along f, with the action of f on classes
    let mut edges: Vec<(usize, usize, Vec<Option<usize>>)> = Vec::new();
    for (i, &(a, x)) in elements.iter().enumerate() {
        for f in c.morphisms().filter(|&f| c.src(f) == a && f != c.identity(a) && support.contains(&c.dst(f))) {
            let j = pos[&(c.dst(f), e.carrier.act(f, x))];
            budget.charge(upper.num_classes(a) as u64, "tabulating the action on classes")?;
            edges.push((i, j, (0..upper.num_classes(a)).map(|k| upper.act(m, f, k)).collect()));
        }
    }
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
    for (t, (i, j, _)) in edges.iter().enumerate() {
        touching[*i].push(t);
        touching[*j].push(t);
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
    for (t, &s) in succ.iter().enumerate() {
        preds[s].push(t);
    }
    let square = |t: usize, sigma: &[Option<usize>]| -> bool {
        let (Some(k), Some(k1)) = (sigma[t], sigma[succ[t]]) else { return true };
        let a = elements[t].0;
        iota[&a][k].is_some() && iota[&a][k] == target[t][k1]
    };
    let fine = |i: usize, sigma: &[Option<usize>]| -> bool {
        square(i, sigma)
            && preds[i].iter().all(|&t| square(t, sigma))
            && touching[i].iter().all(|&t| {
                let (a, b, act) = &edges[t];
                match (sigma[*a], sigma[*b]) {
                    (Some(k), Some(l)) => act[k] == Some(l),
                    _ => true,
                }
            })
    };
    let sizes: Vec<usize> = elements.iter().map(|&(a, _)| upper.num_classes(a)).collect();
    let mut sigma = vec![None; elements.len()];
    let mut count = 0usize;
    fn go(
        i: usize,
        sizes: &[usize],
        sigma: &mut Vec<Option<usize>>,
        fine: &dyn Fn(usize, &[Option<usize>]) -> bool,
        count: &mut usize,
        budget: &Budget,
    ) -> Result<()> {
        if i == sizes.len() {
            *count += 1;
            return Ok(());
        }
        for k in 0..sizes[i] {
            budget.charge(1, "searching candidate solutions")?;
            sigma[i] = Some(k);
            if fine(i, sigma) {
                go(i + 1, sizes, sigma, fine, count, budget)?;
            }
        }
        sigma[i] = None;
        Ok(())
    }
    go(0, &sizes, &mut sigma, &fine, &mut count, budget)?;
    Ok(count)
}
