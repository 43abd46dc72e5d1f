//! Truncated complexes `a_n -/-> … -/-> a_1 -/-> a_0`, their morphisms, and
//! lazily unfolded infinite complexes.

use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{Category, CategoryBuilder, FinCategory, Mor, Obj};
use crate::module::{elems, Coalgebra, Elem, Module};

/// `objs[i] = a_i` for `0 ≤ i ≤ n`, `maps[i-1] = m_i ∈ M(a_i, a_{i-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedComplex {
    pub objs: Vec<Obj>,
    pub maps: Vec<Elem>,
}

impl TruncatedComplex {
    pub fn single(a: Obj) -> Self {
        TruncatedComplex { objs: vec![a], maps: Vec::new() }
    }

    pub fn new(objs: Vec<Obj>, maps: Vec<Elem>) -> Result<Self> {
        if objs.len() != maps.len() + 1 {
            return Err(Error::Invalid("a depth-n complex has n+1 objects".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.src != objs[i + 1] || m.dst != objs[i] {
                return Err(Error::Invalid(format!("arrow m_{} has the wrong endpoints", i + 1)));
            }
        }
        Ok(TruncatedComplex { objs, maps })
    }

    pub fn depth(&self) -> usize {
        self.maps.len()
    }

    pub fn head(&self) -> Obj {
        self.objs[0]
    }

    pub fn last(&self) -> Obj {
        *self.objs.last().expect("nonempty")
    }

    pub fn obj(&self, i: usize) -> Obj {
        self.objs[i]
    }

    /// `m_i` for `1 ≤ i ≤ n`.
    pub fn arrow(&self, i: usize) -> Elem {
        self.maps[i - 1]
    }

    /// Appends a deeper arrow `m ∈ M(a_{n+1}, a_n)`.
    pub fn extend(&self, m: Elem) -> Self {
        debug_assert_eq!(m.dst, self.last());
        let mut c = self.clone();
        c.objs.push(m.src);
        c.maps.push(m);
        c
    }

    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.depth() {
            return Err(Error::DepthExceeded { requested: k, depth: self.depth() });
        }
        Ok(TruncatedComplex { objs: self.objs[..=k].to_vec(), maps: self.maps[..k].to_vec() })
    }

    /// The depth-(n-1) complex headed at `a_1`.
    pub fn tail(&self) -> Self {
        TruncatedComplex { objs: self.objs[1..].to_vec(), maps: self.maps[1..].to_vec() }
    }

    pub fn is_valid(&self, m: &dyn Module) -> bool {
        let c = m.base();
        self.objs.len() == self.maps.len() + 1
            && self.objs.iter().all(|o| o.idx() < c.num_objects())
            && self.maps.iter().enumerate().all(|(i, e)| {
                e.src == self.objs[i + 1] && e.dst == self.objs[i] && (e.idx as usize) < m.count(e.src, e.dst)
            })
    }

    pub fn render(&self, m: &dyn Module) -> String {
        let c = m.base();
        let mut s = c.obj_name(self.last()).to_string();
        for i in (1..=self.depth()).rev() {
            s.push_str(&format!(" -[{}]-> {}", m.label(self.arrow(i)), c.obj_name(self.obj(i - 1))));
        }
        s
    }
}

/// Components `f_i: a_i → a'_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexMorphism {
    pub comps: Vec<Mor>,
}

impl ComplexMorphism {
    pub fn identity(cat: &dyn Category, c: &TruncatedComplex) -> Self {
        ComplexMorphism { comps: c.objs.iter().map(|&a| cat.identity(a)).collect() }
    }

    /// `g ∘ f`, componentwise.
    pub fn compose(cat: &dyn Category, g: &ComplexMorphism, f: &ComplexMorphism) -> Self {
        ComplexMorphism { comps: g.comps.iter().zip(&f.comps).map(|(&gi, &fi)| cat.compose(gi, fi)).collect() }
    }

    pub fn truncate(&self, k: usize) -> Self {
        ComplexMorphism { comps: self.comps[..=k].to_vec() }
    }

    pub fn render(&self, cat: &dyn Category) -> String {
        let parts: Vec<&str> = self.comps.iter().map(|&f| cat.mor_name(f)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Whether `f` is a morphism `src → dst`: every square `m'_i@f_i = f_{i-1}@m_i` commutes.
pub fn is_complex_morphism(m: &dyn Module, src: &TruncatedComplex, dst: &TruncatedComplex, f: &ComplexMorphism) -> bool {
    let c = m.base();
    if src.depth() != dst.depth() || f.comps.len() != src.objs.len() {
        return false;
    }
    for (i, &fi) in f.comps.iter().enumerate() {
        if c.src(fi) != src.obj(i) || c.dst(fi) != dst.obj(i) {
            return false;
        }
    }
    (1..=src.depth()).all(|i| square_commutes(m, src, dst, f, i))
}

pub fn square_commutes(m: &dyn Module, src: &TruncatedComplex, dst: &TruncatedComplex, f: &ComplexMorphism, i: usize) -> bool {
    m.lact(dst.arrow(i), f.comps[i]) == m.ract(f.comps[i - 1], src.arrow(i))
}

/// All depth-`n` complexes with the given head (or every head), depth-major:
/// objects by id, then elements by id.
pub fn enumerate_complexes(m: &dyn Module, n: usize, head: Option<Obj>, budget: &Budget) -> Result<Vec<TruncatedComplex>> {
    let c = m.base();
    let mut level: Vec<TruncatedComplex> = match head {
        Some(h) => vec![TruncatedComplex::single(h)],
        None => c.objects().map(TruncatedComplex::single).collect(),
    };
    budget.charge(level.len() as u64, "enumerating complexes")?;
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &level {
            for a in c.objects() {
                for e in elems(m, a, t.last()) {
                    next.push(t.extend(e));
                }
            }
            budget.charge(0, "enumerating complexes")?;
        }
        budget.charge(next.len() as u64, "enumerating complexes")?;
        level = next;
    }
    Ok(level)
}

/// Number of depth-`n` complexes with the given head, without materializing them.
pub fn count_complexes(m: &dyn Module, n: usize, head: Option<Obj>) -> u128 {
    let c = m.base();
    let no = c.num_objects();
    // ways[b] = number of depth-k complexes ending at b
    let mut ways: Vec<u128> = vec![0; no];
    match head {
        Some(h) => ways[h.idx()] = 1,
        None => ways.iter_mut().for_each(|w| *w = 1),
    }
    for _ in 0..n {
        let mut next = vec![0u128; no];
        for b in c.objects() {
            if ways[b.idx()] == 0 {
                continue;
            }
            for a in c.objects() {
                next[a.idx()] += ways[b.idx()] * m.count(a, b) as u128;
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

/// All morphisms `src → dst`, optionally with a prescribed head component.
pub fn enumerate_morphisms(m: &dyn Module, src: &TruncatedComplex, dst: &TruncatedComplex) -> Vec<ComplexMorphism> {
    morphisms_with_head(m, src, dst, None)
}

pub fn morphisms_with_head(
    m: &dyn Module,
    src: &TruncatedComplex,
    dst: &TruncatedComplex,
    head: Option<Mor>,
) -> Vec<ComplexMorphism> {
    if src.depth() != dst.depth() {
        return Vec::new();
    }
    if let Some(sys) = m.concrete() {
        return sys.chain_maps(src, dst, head);
    }
    let c = m.base();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(src.objs.len());
    morphism_dfs(m, c, src, dst, head, &mut cur, &mut out);
    out
}

fn morphism_dfs(
    m: &dyn Module,
    c: &FinCategory,
    src: &TruncatedComplex,
    dst: &TruncatedComplex,
    head: Option<Mor>,
    cur: &mut Vec<Mor>,
    out: &mut Vec<ComplexMorphism>,
) {
    let i = cur.len();
    if i == src.objs.len() {
        out.push(ComplexMorphism { comps: cur.clone() });
        return;
    }
    for &f in c.hom(src.obj(i), dst.obj(i)) {
        if i == 0 && head.is_some_and(|h| h != f) {
            continue;
        }
        if i > 0 && m.lact(dst.arrow(i), f) != m.ract(cur[i - 1], src.arrow(i)) {
            continue;
        }
        cur.push(f);
        morphism_dfs(m, c, src, dst, head, cur, out);
        cur.pop();
    }
}

/// `Complex_n(M)` restricted to the given complexes, as a finite category.
pub fn complex_category(m: &dyn Module, complexes: &[TruncatedComplex], budget: &Budget) -> Result<FinCategory> {
    let c = m.base();
    let mut b = CategoryBuilder::new(&format!("Complex({})", m.name()));
    for (i, _) in complexes.iter().enumerate() {
        b.object(&format!("C{i}"))?;
    }
    let mut arrows: Vec<(usize, usize, ComplexMorphism)> = Vec::new();
    for (i, s) in complexes.iter().enumerate() {
        for (j, t) in complexes.iter().enumerate() {
            for f in enumerate_morphisms(m, s, t) {
                if i == j && f == ComplexMorphism::identity(c, s) {
                    continue;
                }
                arrows.push((i, j, f));
            }
        }
        budget.charge(complexes.len() as u64, "materializing complex morphisms")?;
    }
    let mut ids = Vec::new();
    for (k, (i, j, f)) in arrows.iter().enumerate() {
        ids.push(b.morphism(&format!("h{k}{}", f.render(c)), Obj(*i as u32), Obj(*j as u32))?);
    }
    let mut lookup = std::collections::HashMap::new();
    for (k, (i, j, f)) in arrows.iter().enumerate() {
        lookup.insert((*i, *j, f.clone()), Some(ids[k]));
    }
    for (i, s) in complexes.iter().enumerate() {
        lookup.insert((i, i, ComplexMorphism::identity(c, s)), None);
    }
    for (k1, (i, j, f)) in arrows.iter().enumerate() {
        for (k2, (j2, l, g)) in arrows.iter().enumerate() {
            if j2 != j {
                continue;
            }
            let gf = ComplexMorphism::compose(c, g, f);
            let target = lookup.get(&(*i, *l, gf)).copied().ok_or_else(|| {
                Error::Invalid("complex morphisms are not closed under composition".into())
            })?;
            match target {
                Some(h) => b.compose(ids[k2], ids[k1], h),
                None => b.compose_to_identity(ids[k2], ids[k1]),
            }
        }
    }
    Ok(b.build())
}

type Step = dyn Fn(Obj, u64) -> (Elem, u64) + Send + Sync;

/// An infinite complex unfolded on demand from a state machine:
/// `step(a_k, s_k) = (m_{k+1}, s_{k+1})` with `m_{k+1} ∈ M(_, a_k)`.
pub struct LazyComplex {
    step: Arc<Step>,
    memo: Mutex<(TruncatedComplex, Vec<u64>)>,
}

impl Clone for LazyComplex {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().expect("memo").clone();
        LazyComplex { step: self.step.clone(), memo: Mutex::new(memo) }
    }
}

impl std::fmt::Debug for LazyComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let memo = self.memo.lock().expect("memo");
        f.debug_struct("LazyComplex").field("known", &memo.0).finish()
    }
}

impl LazyComplex {
    pub fn unfold(head: Obj, seed: u64, step: impl Fn(Obj, u64) -> (Elem, u64) + Send + Sync + 'static) -> Self {
        LazyComplex { step: Arc::new(step), memo: Mutex::new((TruncatedComplex::single(head), vec![seed])) }
    }

    /// The constant complex `… -[m]-> a -[m]-> a` for `m ∈ M(a,a)`.
    pub fn constant(m: Elem) -> Self {
        assert_eq!(m.src, m.dst, "a constant complex needs an endo-element");
        LazyComplex::unfold(m.dst, 0, move |_, s| (m, s))
    }

    /// A prescribed finite prefix continued by `rest` from its last object.
    pub fn with_prefix(prefix: &TruncatedComplex, rest: impl Fn(Obj, u64) -> (Elem, u64) + Send + Sync + 'static) -> Self {
        let arrows = prefix.maps.clone();
        let n = arrows.len() as u64;
        LazyComplex::unfold(prefix.head(), 0, move |a, s| {
            if s < n {
                (arrows[s as usize], s + 1)
            } else {
                let (e, t) = rest(a, s - n);
                (e, t + n)
            }
        })
    }

    pub fn at(&self, n: usize) -> TruncatedComplex {
        self.extend_to(n);
        let memo = self.memo.lock().expect("memo");
        memo.0.truncate(n).expect("extended")
    }

    /// States `s_0, …, s_n` visited while unfolding.
    pub fn states(&self, n: usize) -> Vec<u64> {
        self.extend_to(n);
        self.memo.lock().expect("memo").1[..=n].to_vec()
    }

    fn extend_to(&self, n: usize) {
        let mut memo = self.memo.lock().expect("memo");
        while memo.0.depth() < n {
            let s = *memo.1.last().expect("seeded");
            let (e, s2) = (self.step)(memo.0.last(), s);
            assert_eq!(e.dst, memo.0.last(), "unfolding step returned an arrow into the wrong object");
            let next = memo.0.extend(e);
            memo.0 = next;
            memo.1.push(s2);
        }
    }
}

/// `truncate` for lazy complexes.
pub fn truncate_lazy(c: &LazyComplex, k: usize) -> TruncatedComplex {
    c.at(k)
}

/// The `e`-resolution of `x ∈ X(a)`: states are the carrier elements `x_i`.
pub fn resolution(e: &Coalgebra, a: Obj, x: usize) -> LazyComplex {
    let table: Vec<Vec<(Elem, usize)>> = e.structure.iter().map(|v| v.iter().map(|p| (p.m, p.x)).collect()).collect();
    LazyComplex::unfold(a, x as u64, move |obj, s| {
        let (m1, x1) = table[obj.idx()][s as usize];
        (m1, x1 as u64)
    })
}

/// Resolution truncated at depth `n` with its element trace `(x_0, …, x_n)`.
pub fn resolution_at(e: &Coalgebra, a: Obj, x: usize, n: usize) -> (TruncatedComplex, Vec<usize>) {
    let r = resolution(e, a, x);
    let c = r.at(n);
    (c, r.states(n).into_iter().map(|s| s as usize).collect())
}

/// A deterministic pseudo-random complex headed at `head`, for test diagrams.
pub fn pseudo_random(m: Arc<dyn Module>, head: Obj, seed: u64) -> LazyComplex {
    LazyComplex::unfold(head, seed, move |a, s| {
        let c = m.base();
        let options: Vec<Elem> = c.objects().flat_map(|src| elems(m.as_ref(), src, a)).collect();
        let s2 = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (options[(s2 >> 33) as usize % options.len()], s2)
    })
}
