//! Modules `A^op × A → Set`, their actions, flatness and tensor products.
//!
//! An element `m ∈ M(a,b)` is drawn `a -/-> b`. For `f: a' → a` the left action
//! gives `m@f ∈ M(a',b)`; for `g: b → b'` the right action gives `g@m ∈ M(a,b')`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::builtin::System;
use crate::fincat::{Category, FinCategory, Mor, Obj, Violation};
use crate::union_find::UnionFind;

/// An element of `M(src, dst)`, identified by its index in that set.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub src: Obj,
    pub dst: Obj,
    pub idx: u32,
}

pub trait Module: Send + Sync {
    fn name(&self) -> &str;
    fn base(&self) -> &FinCategory;
    /// `|M(a,b)|`.
    fn count(&self, a: Obj, b: Obj) -> usize;
    /// `m@f` for `f: a' → m.src`.
    fn try_lact(&self, m: Elem, f: Mor) -> Option<Elem>;
    /// `g@m` for `g: m.dst → b'`.
    fn try_ract(&self, g: Mor, m: Elem) -> Option<Elem>;
    fn label(&self, m: Elem) -> String;

    /// Object bound for modules generated over a truncated infinite base.
    fn bound(&self) -> Option<usize> {
        None
    }

    /// Carrier-level access for builtin systems.
    fn concrete(&self) -> Option<&System> {
        None
    }

    /// Whether this is the identity module of its base.
    fn is_identity(&self) -> bool {
        false
    }

    fn lact(&self, m: Elem, f: Mor) -> Elem {
        self.try_lact(m, f).expect("left action undefined")
    }

    fn ract(&self, g: Mor, m: Elem) -> Elem {
        self.try_ract(g, m).expect("right action undefined")
    }
}

pub fn elems(m: &dyn Module, a: Obj, b: Obj) -> impl Iterator<Item = Elem> {
    (0..m.count(a, b) as u32).map(move |idx| Elem { src: a, dst: b, idx })
}

/// All elements with source `a`, grouped by target in object order.
pub fn elems_from(m: &dyn Module, a: Obj) -> Vec<Elem> {
    let c = m.base();
    c.objects().flat_map(|b| elems(m, a, b)).collect()
}

/// A module given extensionally by action tables.
#[derive(Clone, Debug)]
pub struct TableModule {
    name: String,
    base: Arc<FinCategory>,
    labels: Vec<Vec<String>>,
    lact: HashMap<(Elem, Mor), Elem>,
    ract: HashMap<(Mor, Elem), Elem>,
    index: HashMap<String, Elem>,
}

impl TableModule {
    pub fn new(name: &str, base: Arc<FinCategory>) -> Self {
        let n = base.num_objects();
        TableModule {
            name: name.to_string(),
            base,
            labels: vec![Vec::new(); n * n],
            lact: HashMap::new(),
            ract: HashMap::new(),
            index: HashMap::new(),
        }
    }

    pub fn base_arc(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn add_element(&mut self, label: &str, a: Obj, b: Obj) -> Elem {
        let n = self.base.num_objects();
        let list = &mut self.labels[a.idx() * n + b.idx()];
        let e = Elem { src: a, dst: b, idx: list.len() as u32 };
        list.push(label.to_string());
        self.index.insert(label.to_string(), e);
        e
    }

    pub fn element(&self, label: &str) -> Option<Elem> {
        self.index.get(label).copied()
    }

    pub fn set_lact(&mut self, m: Elem, f: Mor, r: Elem) {
        self.lact.insert((m, f), r);
    }

    pub fn set_ract(&mut self, g: Mor, m: Elem, r: Elem) {
        self.ract.insert((g, m), r);
    }

    pub fn all_elements(&self) -> Vec<Elem> {
        let c = &*self.base;
        let mut out = Vec::new();
        for a in c.objects() {
            for b in c.objects() {
                out.extend(elems(self, a, b));
            }
        }
        out
    }

    /// Copies any module into table form.
    pub fn materialize(m: &dyn Module, base: Arc<FinCategory>) -> Self {
        let mut t = TableModule::new(m.name(), base);
        let c = m.base();
        let mut all = Vec::new();
        for a in c.objects() {
            for b in c.objects() {
                for e in elems(m, a, b) {
                    t.add_element(&m.label(e), a, b);
                    all.push(e);
                }
            }
        }
        for &e in &all {
            for x in c.objects() {
                for &f in c.hom(x, e.src) {
                    if let Some(r) = m.try_lact(e, f) {
                        t.set_lact(e, f, r);
                    }
                }
                for &g in c.hom(e.dst, x) {
                    if let Some(r) = m.try_ract(g, e) {
                        t.set_ract(g, e, r);
                    }
                }
            }
        }
        t
    }
}

impl Module for TableModule {
    fn name(&self) -> &str {
        &self.name
    }
    fn base(&self) -> &FinCategory {
        &self.base
    }
    fn count(&self, a: Obj, b: Obj) -> usize {
        self.labels[a.idx() * self.base.num_objects() + b.idx()].len()
    }
    fn try_lact(&self, m: Elem, f: Mor) -> Option<Elem> {
        if let Some(&r) = self.lact.get(&(m, f)) {
            return Some(r);
        }
        (f == self.base.identity(m.src)).then_some(m)
    }
    fn try_ract(&self, g: Mor, m: Elem) -> Option<Elem> {
        if let Some(&r) = self.ract.get(&(g, m)) {
            return Some(r);
        }
        (g == self.base.identity(m.dst)).then_some(m)
    }
    fn label(&self, m: Elem) -> String {
        self.labels[m.src.idx() * self.base.num_objects() + m.dst.idx()][m.idx as usize].clone()
    }
}

/// The identity module `A(-,-)`: elements of `M(a,b)` are the morphisms `a → b`.
#[derive(Clone, Debug)]
pub struct IdentityModule {
    name: String,
    base: Arc<FinCategory>,
    pos: Vec<u32>,
}

impl IdentityModule {
    pub fn new(base: Arc<FinCategory>) -> Self {
        let mut pos = vec![0; base.num_morphisms()];
        for a in base.objects() {
            for b in base.objects() {
                for (i, &f) in base.hom(a, b).iter().enumerate() {
                    pos[f.idx()] = i as u32;
                }
            }
        }
        IdentityModule { name: format!("id({})", base.name()), base, pos }
    }

    pub fn elem_of(&self, f: Mor) -> Elem {
        Elem { src: self.base.src(f), dst: self.base.dst(f), idx: self.pos[f.idx()] }
    }

    pub fn mor_of(&self, m: Elem) -> Mor {
        self.base.hom(m.src, m.dst)[m.idx as usize]
    }
}

impl Module for IdentityModule {
    fn name(&self) -> &str {
        &self.name
    }
    fn base(&self) -> &FinCategory {
        &self.base
    }
    fn count(&self, a: Obj, b: Obj) -> usize {
        self.base.hom(a, b).len()
    }
    fn try_lact(&self, m: Elem, f: Mor) -> Option<Elem> {
        let g = self.mor_of(m);
        self.base.try_compose(g, f).map(|h| self.elem_of(h))
    }
    fn try_ract(&self, g: Mor, m: Elem) -> Option<Elem> {
        let f = self.mor_of(m);
        self.base.try_compose(g, f).map(|h| self.elem_of(h))
    }
    fn label(&self, m: Elem) -> String {
        self.base.mor_name(self.mor_of(m)).to_string()
    }
    fn is_identity(&self) -> bool {
        true
    }
}

pub fn validate_module(m: &dyn Module) -> Vec<Violation> {
    let c = m.base();
    let mut out = Vec::new();
    let mut all = Vec::new();
    for a in c.objects() {
        for b in c.objects() {
            all.extend(elems(m, a, b));
        }
    }
    for &e in &all {
        for x in c.objects() {
            for &f in c.hom(x, e.src) {
                match m.try_lact(e, f) {
                    None => out.push(Violation::new(
                        "left action undefined",
                        format!("{} @ {}", m.label(e), c.mor_name(f)),
                    )),
                    Some(r) if r.src != x || r.dst != e.dst => out.push(Violation::new(
                        "left action lands in the wrong set",
                        format!("{} @ {}", m.label(e), c.mor_name(f)),
                    )),
                    _ => {}
                }
            }
            for &g in c.hom(e.dst, x) {
                match m.try_ract(g, e) {
                    None => out.push(Violation::new(
                        "right action undefined",
                        format!("{} @ {}", c.mor_name(g), m.label(e)),
                    )),
                    Some(r) if r.src != e.src || r.dst != x => out.push(Violation::new(
                        "right action lands in the wrong set",
                        format!("{} @ {}", c.mor_name(g), m.label(e)),
                    )),
                    _ => {}
                }
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for &e in &all {
        if m.lact(e, c.identity(e.src)) != e {
            out.push(Violation::new(
                "m@id = m",
                format!("({}, {})", m.label(e), c.mor_name(c.identity(e.src))),
            ));
        }
        if m.ract(c.identity(e.dst), e) != e {
            out.push(Violation::new(
                "id@m = m",
                format!("({}, {})", c.mor_name(c.identity(e.dst)), m.label(e)),
            ));
        }
        for x in c.objects() {
            for &f in c.hom(x, e.src) {
                let ef = m.lact(e, f);
                for y in c.objects() {
                    for &f2 in c.hom(y, x) {
                        if m.lact(e, c.compose(f, f2)) != m.lact(ef, f2) {
                            out.push(Violation::new(
                                "m@(f.f') = (m@f)@f'",
                                format!(
                                    "({}, {}, {})",
                                    m.label(e),
                                    c.mor_name(f),
                                    c.mor_name(f2)
                                ),
                            ));
                        }
                    }
                }
                for z in c.objects() {
                    for &g in c.hom(e.dst, z) {
                        if m.lact(m.ract(g, e), f) != m.ract(g, ef) {
                            out.push(Violation::new(
                                "(g@m)@f = g@(m@f)",
                                format!("({}, {}, {})", c.mor_name(g), m.label(e), c.mor_name(f)),
                            ));
                        }
                    }
                }
            }
            for &g in c.hom(e.dst, x) {
                let ge = m.ract(g, e);
                for y in c.objects() {
                    for &g2 in c.hom(x, y) {
                        if m.ract(c.compose(g2, g), e) != m.ract(g2, ge) {
                            out.push(Violation::new(
                                "(g'.g)@m = g'@(g@m)",
                                format!(
                                    "({}, {}, {})",
                                    c.mor_name(g2),
                                    c.mor_name(g),
                                    m.label(e)
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Which elementary flatness condition failed, with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatFailure {
    NoElement { a: Obj },
    NoSpan { m1: Elem, m2: Elem },
    NoFork { m1: Elem, u: Mor, v: Mor },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatVerdict {
    pub failure: Option<FlatFailure>,
    /// Witnesses that had to be built on objects outside the bound.
    pub beyond_bound: usize,
    pub checked_pairs: usize,
    /// Set when the pairs were drawn from a seeded sample rather than exhausted.
    pub sampled: bool,
}

impl FlatVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }

    pub fn describe(&self, m: &dyn Module) -> String {
        let c = m.base();
        match &self.failure {
            None => "flat".into(),
            Some(FlatFailure::NoElement { a }) => {
                format!("condition (1): no element out of {}", c.obj_name(*a))
            }
            Some(FlatFailure::NoSpan { m1, m2 }) => {
                format!("condition (2): no span for {} and {}", m.label(*m1), m.label(*m2))
            }
            Some(FlatFailure::NoFork { m1, u, v }) => format!(
                "condition (3): no fork for {} under {}, {}",
                m.label(*m1),
                c.mor_name(*u),
                c.mor_name(*v)
            ),
        }
    }
}

/// Elementary flatness of `M(a,-)`. Builtin systems construct witnesses on
/// carriers; other modules are searched exhaustively.
pub fn flat_check(m: &dyn Module, a: Obj) -> FlatVerdict {
    if let Some(k) = m.concrete() {
        return k.flat_check(a);
    }
    flat_check_search(m, a)
}

pub fn flat_check_search(m: &dyn Module, a: Obj) -> FlatVerdict {
    let c = m.base();
    let all = elems_from(m, a);
    let mut verdict = FlatVerdict { failure: None, beyond_bound: 0, checked_pairs: 0, sampled: false };
    if all.is_empty() {
        verdict.failure = Some(FlatFailure::NoElement { a });
        return verdict;
    }
    let pos: HashMap<Elem, usize> = all.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let n = all.len();
    let mut covered = vec![false; n * n];
    for &e in &all {
        let mut reach: Vec<usize> = Vec::new();
        for b in c.objects() {
            for &f in c.hom(e.dst, b) {
                reach.push(pos[&m.ract(f, e)]);
            }
        }
        reach.sort_unstable();
        reach.dedup();
        for &i in &reach {
            for &j in &reach {
                covered[i * n + j] = true;
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            verdict.checked_pairs += 1;
            if !covered[i * n + j] {
                verdict.failure = Some(FlatFailure::NoSpan { m1: all[i], m2: all[j] });
                return verdict;
            }
        }
    }
    for &m1 in &all {
        let b1 = m1.dst;
        for b2 in c.objects() {
            let hom = c.hom(b1, b2);
            for (i, &u) in hom.iter().enumerate() {
                for &v in &hom[i + 1..] {
                    if m.ract(u, m1) != m.ract(v, m1) {
                        continue;
                    }
                    verdict.checked_pairs += 1;
                    let found = all.iter().any(|&e| {
                        c.hom(e.dst, b1).iter().any(|&f| {
                            m.ract(f, e) == m1 && c.compose(u, f) == c.compose(v, f)
                        })
                    });
                    if !found {
                        verdict.failure = Some(FlatFailure::NoFork { m1, u, v });
                        return verdict;
                    }
                }
            }
        }
    }
    verdict
}

/// A functor `A → Set` with finite values.
pub trait SetFunctor {
    fn size(&self, a: Obj) -> usize;
    /// `X(f)(x)` for `f: a → b`, `x ∈ X(a)`.
    fn act(&self, f: Mor, x: usize) -> usize;
    fn label(&self, a: Obj, x: usize) -> String;
}

/// `M(a,-)` viewed as a functor.
pub struct Partial<'m> {
    pub module: &'m dyn Module,
    pub a: Obj,
}

impl SetFunctor for Partial<'_> {
    fn size(&self, b: Obj) -> usize {
        self.module.count(self.a, b)
    }
    fn act(&self, f: Mor, x: usize) -> usize {
        let c = self.module.base();
        let e = Elem { src: self.a, dst: c.src(f), idx: x as u32 };
        self.module.ract(f, e).idx as usize
    }
    fn label(&self, b: Obj, x: usize) -> String {
        self.module.label(Elem { src: self.a, dst: b, idx: x as u32 })
    }
}

/// A pair `(m, x)` with `m ∈ M(a1, c)` and `x ∈ X(a1)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoendPair {
    pub m: Elem,
    pub x: usize,
}

/// The classes of `∫^{a1} M(a1,c) × X(a1)` at a fixed `c`.
#[derive(Clone, Debug)]
pub struct CoendTable {
    pub c: Obj,
    pairs: Vec<CoendPair>,
    index: HashMap<CoendPair, usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl CoendTable {
    /// Union-find over all pairs, identifying `(m@f, x)` with `(m, X(f)x)`.
    pub fn build(m: &dyn Module, x: &dyn SetFunctor, c: Obj) -> Self {
        let cat = m.base();
        let mut pairs = Vec::new();
        for a1 in cat.objects() {
            let nx = x.size(a1);
            for e in elems(m, a1, c) {
                for xi in 0..nx {
                    pairs.push(CoendPair { m: e, x: xi });
                }
            }
        }
        let index: HashMap<CoendPair, usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut uf = UnionFind::new(pairs.len());
        for (i, p) in pairs.iter().enumerate() {
            let a1 = p.m.src;
            for a2 in cat.objects() {
                for &f in cat.hom(a2, a1) {
                    for xi in 0..x.size(a2) {
                        let lhs = CoendPair { m: m.lact(p.m, f), x: xi };
                        if x.act(f, xi) == p.x {
                            uf.union(index[&lhs], i);
                        }
                    }
                }
            }
        }
        let (class_of, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (i, &k) in class_of.iter().enumerate() {
            if reps[k] == usize::MAX {
                reps[k] = i;
            }
        }
        CoendTable { c, pairs, index, class_of, reps }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn class(&self, p: CoendPair) -> Option<usize> {
        self.index.get(&p).map(|&i| self.class_of[i])
    }

    pub fn rep(&self, k: usize) -> CoendPair {
        self.pairs[self.reps[k]]
    }

    pub fn members(&self, k: usize) -> Vec<CoendPair> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| self.class_of[*i] == k)
            .map(|(_, &p)| p)
            .collect()
    }

    pub fn partition(&self) -> Vec<usize> {
        self.class_of.clone()
    }

    pub fn pairs(&self) -> &[CoendPair] {
        &self.pairs
    }
}

/// `N ⊗ M`, materialized with one element per coend class.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: TableModule,
    /// For each element of the result, its least representative `(b, n, m)`.
    pub reps: HashMap<Elem, (Elem, Elem)>,
}

pub fn tensor(n: &dyn Module, m: &dyn Module, base: Arc<FinCategory>) -> Tensor {
    let cat = m.base();
    let objs: Vec<Obj> = cat.objects().collect();
    let mut tables: HashMap<(Obj, Obj), CoendTable> = HashMap::new();
    for &a in &objs {
        let x = Partial { module: m, a };
        for &c in &objs {
            tables.insert((a, c), CoendTable::build(n, &x, c));
        }
    }
    let mut out = TableModule::new(&format!("{} (x) {}", n.name(), m.name()), base);
    let mut reps = HashMap::new();
    for &a in &objs {
        for &c in &objs {
            let t = &tables[&(a, c)];
            for k in 0..t.num_classes() {
                let p = t.rep(k);
                let me = Elem { src: a, dst: p.m.src, idx: p.x as u32 };
                let e = out.add_element(&format!("[{} (x) {}]", n.label(p.m), m.label(me)), a, c);
                debug_assert_eq!(e.idx as usize, k);
                reps.insert(e, (p.m, me));
            }
        }
    }
    for &a in &objs {
        for &c in &objs {
            let t = &tables[&(a, c)];
            for k in 0..t.num_classes() {
                let e = Elem { src: a, dst: c, idx: k as u32 };
                let (ne, me) = reps[&e];
                for &a2 in &objs {
                    for &f in cat.hom(a2, a) {
                        let me2 = m.lact(me, f);
                        let k2 = tables[&(a2, c)]
                            .class(CoendPair { m: ne, x: me2.idx as usize })
                            .expect("pair present");
                        out.set_lact(e, f, Elem { src: a2, dst: c, idx: k2 as u32 });
                    }
                    for &g in cat.hom(c, a2) {
                        let ne2 = n.ract(g, ne);
                        let k2 = tables[&(a, a2)]
                            .class(CoendPair { m: ne2, x: me.idx as usize })
                            .expect("pair present");
                        out.set_ract(g, e, Elem { src: a, dst: a2, idx: k2 as u32 });
                    }
                }
            }
        }
    }
    Tensor { module: out, reps }
}

/// A functor `A → Set` given by explicit value sets and action tables.
#[derive(Clone, Debug)]
pub struct FinSetFunctor {
    pub name: String,
    pub base: Arc<FinCategory>,
    pub values: Vec<Vec<String>>,
    /// `action[f][x]` for `f: a → b`, `x ∈ X(a)`.
    pub action: Vec<Vec<usize>>,
}

impl FinSetFunctor {
    pub fn new(name: &str, base: Arc<FinCategory>, values: Vec<Vec<String>>) -> Self {
        let action = base
            .morphisms()
            .map(|f| {
                let n = values[base.src(f).idx()].len();
                if base.src(f) == base.dst(f) && f == base.identity(base.src(f)) {
                    (0..n).collect()
                } else {
                    vec![usize::MAX; n]
                }
            })
            .collect();
        FinSetFunctor { name: name.to_string(), base, values, action }
    }

    pub fn find(&self, a: Obj, label: &str) -> Option<usize> {
        self.values[a.idx()].iter().position(|s| s == label)
    }

    /// The representable functor `A(a,-)`.
    pub fn representable(base: Arc<FinCategory>, a: Obj) -> Self {
        let values: Vec<Vec<String>> = base
            .objects()
            .map(|b| base.hom(a, b).iter().map(|&f| base.mor_name(f).to_string()).collect())
            .collect();
        let mut x = FinSetFunctor::new(&format!("A({},-)", base.obj_name(a)), base.clone(), values);
        for g in base.morphisms() {
            let (b, b2) = (base.src(g), base.dst(g));
            let hb = base.hom(a, b);
            let hb2 = base.hom(a, b2);
            x.action[g.idx()] = hb
                .iter()
                .map(|&f| {
                    let h = base.compose(g, f);
                    hb2.iter().position(|&k| k == h).expect("composite in hom")
                })
                .collect();
        }
        x
    }

    pub fn validate(&self) -> Vec<Violation> {
        let c = &*self.base;
        let mut out = Vec::new();
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.dst(f));
            let row = &self.action[f.idx()];
            if row.len() != self.values[a.idx()].len()
                || row.iter().any(|&y| y >= self.values[b.idx()].len())
            {
                out.push(Violation::new("fmap undefined or out of range", c.mor_name(f).to_string()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in c.objects() {
            let id = c.identity(a);
            if self.action[id.idx()].iter().enumerate().any(|(i, &y)| i != y) {
                out.push(Violation::new("identity not preserved", c.obj_name(a).to_string()));
            }
        }
        for f in c.morphisms() {
            for g in c.morphisms() {
                if let Some(gf) = c.try_compose(g, f) {
                    for x in 0..self.values[c.src(f).idx()].len() {
                        if self.act(gf, x) != self.act(g, self.act(f, x)) {
                            out.push(Violation::new(
                                "composition not preserved",
                                format!(
                                    "({}, {}) at {}",
                                    c.mor_name(g),
                                    c.mor_name(f),
                                    self.values[c.src(f).idx()][x]
                                ),
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// The category of elements: objects `(a, x)`, morphisms `f` with `X(f)(x) = x'`.
    pub fn elements_category(&self) -> FinCategory {
        use crate::fincat::CategoryBuilder;
        let c = &*self.base;
        let mut b = CategoryBuilder::new(&format!("elts({})", self.name));
        let mut ids = HashMap::new();
        for a in c.objects() {
            for (x, lab) in self.values[a.idx()].iter().enumerate() {
                let o = b.object(&format!("({},{})", c.obj_name(a), lab)).expect("fresh");
                ids.insert((a, x), o);
            }
        }
        let is_id = |f: Mor| f == c.identity(c.src(f));
        let mut user = HashMap::new();
        for f in c.morphisms().filter(|&f| !is_id(f)) {
            let (a, a2) = (c.src(f), c.dst(f));
            for x in 0..self.values[a.idx()].len() {
                let name = format!("{}@{}", c.mor_name(f), self.values[a.idx()][x]);
                let m = b.morphism(&name, ids[&(a, x)], ids[&(a2, self.act(f, x))]).expect("fresh");
                user.insert((f, x), m);
            }
        }
        // identities are appended after the user morphisms by the builder
        let n_user = user.len() as u32;
        let lookup = |f: Mor, x: usize| -> Mor {
            if is_id(f) {
                Mor(n_user + ids[&(c.src(f), x)].0)
            } else {
                user[&(f, x)]
            }
        };
        let mut keys: Vec<(Mor, usize)> = user.keys().copied().collect();
        keys.sort_unstable();
        for &(f, x) in &keys {
            let y = self.act(f, x);
            for b3 in c.objects() {
                for &g in c.hom(c.dst(f), b3) {
                    if is_id(g) {
                        continue;
                    }
                    b.compose(user[&(g, y)], user[&(f, x)], lookup(c.compose(g, f), x));
                }
            }
        }
        b.build()
    }
}

impl SetFunctor for FinSetFunctor {
    fn size(&self, a: Obj) -> usize {
        self.values[a.idx()].len()
    }
    fn act(&self, f: Mor, x: usize) -> usize {
        self.action[f.idx()][x]
    }
    fn label(&self, a: Obj, x: usize) -> String {
        self.values[a.idx()][x].clone()
    }
}

/// `M ⊗ X` as a finite functor whose values are coend classes.
pub fn apply_module(m: &dyn Module, x: &dyn SetFunctor, base: Arc<FinCategory>) -> FinSetFunctor {
    let cat = m.base();
    let tables: Vec<CoendTable> = cat.objects().map(|c| CoendTable::build(m, x, c)).collect();
    let values = tables
        .iter()
        .map(|t| {
            (0..t.num_classes())
                .map(|k| {
                    let p = t.rep(k);
                    format!("[{} (x) {}]", m.label(p.m), x.label(p.m.src, p.x))
                })
                .collect()
        })
        .collect();
    let mut out = FinSetFunctor::new(&format!("{} (x) X", m.name()), base, values);
    for g in cat.morphisms() {
        let (c, c2) = (cat.src(g), cat.dst(g));
        let t = &tables[c.idx()];
        out.action[g.idx()] = (0..t.num_classes())
            .map(|k| {
                let p = t.rep(k);
                tables[c2.idx()].class(CoendPair { m: m.ract(g, p.m), x: p.x }).expect("pair")
            })
            .collect();
    }
    out
}

pub fn functor_flat_check(x: &FinSetFunctor) -> (bool, String) {
    let elts = x.elements_category();
    let v = crate::fincat::is_cofiltered(&elts);
    (v.holds(), v.describe(&elts))
}

/// A coalgebra `e: X → M ⊗ X`, each value stored by one representative pair.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    pub name: String,
    pub carrier: FinSetFunctor,
    /// `structure[a][x] = (m1, x1)` with `m1 ∈ M(a1, a)`, `x1 ∈ X(a1)`.
    pub structure: Vec<Vec<CoendPair>>,
}

impl Coalgebra {
    pub fn validate(&self, m: &dyn Module) -> Vec<Violation> {
        let c = m.base();
        let x = &self.carrier;
        let mut out = x.validate();
        if !out.is_empty() {
            return out;
        }
        for a in c.objects() {
            if self.structure[a.idx()].len() != x.size(a) {
                out.push(Violation::new("structure map not total", c.obj_name(a).to_string()));
                continue;
            }
            for (xi, p) in self.structure[a.idx()].iter().enumerate() {
                if p.m.dst != a || p.x >= x.size(p.m.src) {
                    out.push(Violation::new(
                        "structure value has the wrong type",
                        format!("e_{}({})", c.obj_name(a), x.label(a, xi)),
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let tables: Vec<CoendTable> = c.objects().map(|b| CoendTable::build(m, x, b)).collect();
        for f in c.morphisms() {
            let (a, a2) = (c.src(f), c.dst(f));
            for xi in 0..x.size(a) {
                let p = self.structure[a.idx()][xi];
                let pushed = CoendPair { m: m.ract(f, p.m), x: p.x };
                let q = self.structure[a2.idx()][x.act(f, xi)];
                let t = &tables[a2.idx()];
                if t.class(pushed) != t.class(q) {
                    out.push(Violation::new(
                        "naturality of e",
                        format!("{} at {}", c.mor_name(f), x.label(a, xi)),
                    ));
                }
            }
        }
        out
    }
}

/// A module morphism `c: A → M`, one element `c(f) ∈ M(a',a)` per `f: a' → a`.
#[derive(Clone, Debug)]
pub struct Pointing {
    pub values: Vec<Elem>,
}

pub fn validate_pointing(m: &dyn Module, p: &Pointing) -> Vec<Violation> {
    let c = m.base();
    let mut out = Vec::new();
    for f in c.morphisms() {
        let e = p.values[f.idx()];
        if e.src != c.src(f) || e.dst != c.dst(f) {
            out.push(Violation::new("pointing value has the wrong type", c.mor_name(f).to_string()));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in c.morphisms() {
        let e = p.values[f.idx()];
        for x in c.objects() {
            for &g in c.hom(c.dst(f), x) {
                if p.values[c.compose(g, f).idx()] != m.ract(g, e) {
                    out.push(Violation::new(
                        "c(g.f) = g@c(f)",
                        format!("({}, {})", c.mor_name(g), c.mor_name(f)),
                    ));
                }
            }
            for &h in c.hom(x, c.src(f)) {
                if p.values[c.compose(f, h).idx()] != m.lact(e, h) {
                    out.push(Violation::new(
                        "c(f.h) = c(f)@h",
                        format!("({}, {})", c.mor_name(f), c.mor_name(h)),
                    ));
                }
            }
        }
    }
    out
}

/// The representable coalgebra `A(a,-) → M ⊗ A(a,-)` induced by a pointing:
/// `f ↦ [(c(f), id_a)]`.
pub fn pointed_coalgebra(p: &Pointing, base: Arc<FinCategory>, a: Obj) -> Coalgebra {
    let x = FinSetFunctor::representable(base.clone(), a);
    let id_pos = base.hom(a, a).iter().position(|&f| f == base.identity(a)).expect("identity");
    let structure = base
        .objects()
        .map(|b| {
            base.hom(a, b)
                .iter()
                .map(|&f| CoendPair { m: p.values[f.idx()], x: id_pos })
                .collect()
        })
        .collect();
    Coalgebra { name: format!("c_{}", base.obj_name(a)), carrier: x, structure }
}
