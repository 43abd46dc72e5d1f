//! Finite categories, finite preorders and brute-force categorical checks.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub u32);

impl Obj {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

const NONE: u32 = u32::MAX;

/// Read-only view of a finite category. Implemented by [`FinCategory`] and its opposite view.
pub trait Category {
    fn num_objects(&self) -> usize;
    fn num_morphisms(&self) -> usize;
    fn src(&self, f: Mor) -> Obj;
    fn dst(&self, f: Mor) -> Obj;
    fn identity(&self, a: Obj) -> Mor;
    /// `g ∘ f`, or `None` when undefined.
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor>;
    fn hom(&self, a: Obj, b: Obj) -> &[Mor];
    fn obj_name(&self, a: Obj) -> &str;
    fn mor_name(&self, f: Mor) -> &str;

    fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!("composition undefined for {} . {}", self.mor_name(g), self.mor_name(f))
        })
    }

    fn objects(&self) -> Box<dyn Iterator<Item = Obj> + '_> {
        Box::new((0..self.num_objects() as u32).map(Obj))
    }

    fn morphisms(&self) -> Box<dyn Iterator<Item = Mor> + '_> {
        Box::new((0..self.num_morphisms() as u32).map(Mor))
    }
}

#[derive(Clone, Debug)]
pub struct FinCategory {
    name: String,
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Obj>,
    dst: Vec<Obj>,
    ident: Vec<Mor>,
    comp: Vec<u32>,
    homs: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
    spurious: Vec<(Mor, Mor)>,
}

impl Category for FinCategory {
    fn num_objects(&self) -> usize {
        self.obj_names.len()
    }
    fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }
    fn src(&self, f: Mor) -> Obj {
        self.src[f.idx()]
    }
    fn dst(&self, f: Mor) -> Obj {
        self.dst[f.idx()]
    }
    fn identity(&self, a: Obj) -> Mor {
        self.ident[a.idx()]
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let v = self.comp[g.idx() * self.mor_names.len() + f.idx()];
        (v != NONE).then_some(Mor(v))
    }
    fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.homs[a.idx() * self.obj_names.len() + b.idx()]
    }
    fn obj_name(&self, a: Obj) -> &str {
        &self.obj_names[a.idx()]
    }
    fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f.idx()]
    }
}

impl FinCategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    pub fn op(&self) -> Op<'_> {
        Op(self)
    }

    /// The one-object, one-morphism category.
    pub fn terminal() -> FinCategory {
        let mut b = CategoryBuilder::new("terminal");
        b.object("*").unwrap();
        b.build()
    }

    /// Discrete category on the given object names.
    pub fn discrete(name: &str, objects: &[&str]) -> FinCategory {
        let mut b = CategoryBuilder::new(name);
        for o in objects {
            b.object(o).unwrap();
        }
        b.build()
    }
}

/// Opposite of a finite category, sharing morphism ids.
#[derive(Clone, Copy)]
pub struct Op<'a>(pub &'a FinCategory);

impl Category for Op<'_> {
    fn num_objects(&self) -> usize {
        self.0.num_objects()
    }
    fn num_morphisms(&self) -> usize {
        self.0.num_morphisms()
    }
    fn src(&self, f: Mor) -> Obj {
        self.0.dst(f)
    }
    fn dst(&self, f: Mor) -> Obj {
        self.0.src(f)
    }
    fn identity(&self, a: Obj) -> Mor {
        self.0.identity(a)
    }
    fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.0.try_compose(f, g)
    }
    fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.0.hom(b, a)
    }
    fn obj_name(&self, a: Obj) -> &str {
        self.0.obj_name(a)
    }
    fn mor_name(&self, f: Mor) -> &str {
        self.0.mor_name(f)
    }
}

/// Incremental construction of a [`FinCategory`]. Identities `id:<obj>` and
/// their compositions are generated automatically.
#[derive(Debug, Default)]
pub struct CategoryBuilder {
    name: String,
    objs: Vec<String>,
    mors: Vec<(String, Obj, Obj)>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
    comps: Vec<(Mor, Mor, Mor)>,
    id_comps: Vec<(Mor, Mor)>,
}

impl CategoryBuilder {
    pub fn new(name: &str) -> Self {
        CategoryBuilder { name: name.to_string(), ..Default::default() }
    }

    pub fn object(&mut self, name: &str) -> Result<Obj> {
        if self.obj_index.contains_key(name) {
            return Err(Error::Invalid(format!("object `{name}` declared twice")));
        }
        let o = Obj(self.objs.len() as u32);
        self.objs.push(name.to_string());
        self.obj_index.insert(name.to_string(), o);
        Ok(o)
    }

    pub fn object_id(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    pub fn morphism(&mut self, name: &str, src: Obj, dst: Obj) -> Result<Mor> {
        if name.starts_with("id:") {
            return Err(Error::Invalid(format!("`{name}` uses the reserved identity prefix")));
        }
        if self.mor_index.contains_key(name) {
            return Err(Error::Invalid(format!("morphism `{name}` declared twice")));
        }
        let m = Mor(self.mors.len() as u32);
        self.mors.push((name.to_string(), src, dst));
        self.mor_index.insert(name.to_string(), m);
        Ok(m)
    }

    pub fn compose(&mut self, g: Mor, f: Mor, h: Mor) {
        self.comps.push((g, f, h));
    }

    /// Declares `g ∘ f` to be the identity on the source of `f`.
    pub fn compose_to_identity(&mut self, g: Mor, f: Mor) {
        self.id_comps.push((g, f));
    }

    pub fn build(self) -> FinCategory {
        let n_obj = self.objs.len();
        let n_user = self.mors.len();
        let n = n_user + n_obj;
        let mut mor_names = Vec::with_capacity(n);
        let mut src = Vec::with_capacity(n);
        let mut dst = Vec::with_capacity(n);
        for (name, s, d) in &self.mors {
            mor_names.push(name.clone());
            src.push(*s);
            dst.push(*d);
        }
        let mut ident = Vec::with_capacity(n_obj);
        for (i, o) in self.objs.iter().enumerate() {
            ident.push(Mor((n_user + i) as u32));
            mor_names.push(format!("id:{o}"));
            src.push(Obj(i as u32));
            dst.push(Obj(i as u32));
        }
        let mut comp = vec![NONE; n * n];
        let mut spurious = Vec::new();
        for &(g, f, h) in &self.comps {
            if dst[f.idx()] == src[g.idx()] {
                comp[g.idx() * n + f.idx()] = h.0;
            } else {
                spurious.push((g, f));
            }
        }
        for &(g, f) in &self.id_comps {
            if dst[f.idx()] == src[g.idx()] && dst[g.idx()] == src[f.idx()] {
                comp[g.idx() * n + f.idx()] = ident[src[f.idx()].idx()].0;
            } else {
                spurious.push((g, f));
            }
        }
        for f in 0..n {
            let i_src = ident[src[f].idx()];
            let i_dst = ident[dst[f].idx()];
            comp[i_dst.idx() * n + f] = f as u32;
            comp[f * n + i_src.idx()] = f as u32;
        }
        let mut homs = vec![Vec::new(); n_obj * n_obj];
        for f in 0..n {
            homs[src[f].idx() * n_obj + dst[f].idx()].push(Mor(f as u32));
        }
        let mut mor_index = self.mor_index;
        for (i, o) in self.objs.iter().enumerate() {
            mor_index.insert(format!("id:{o}"), ident[i]);
        }
        FinCategory {
            name: self.name,
            obj_names: self.objs,
            mor_names,
            src,
            dst,
            ident,
            comp,
            homs,
            obj_index: self.obj_index,
            mor_index,
            spurious,
        }
    }
}

/// One violated law together with the offending data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation { law: law.into(), witness: witness.into() }
    }
}

pub fn validate_category(c: &FinCategory) -> Vec<Violation> {
    let mut out = Vec::new();
    for &(g, f) in &c.spurious {
        out.push(Violation::new(
            "composition defined for a non-composable pair",
            format!("({}, {})", c.mor_name(g), c.mor_name(f)),
        ));
    }
    for g in c.morphisms() {
        for f in c.morphisms() {
            if c.dst(f) != c.src(g) {
                continue;
            }
            match c.try_compose(g, f) {
                None => out.push(Violation::new(
                    format!("composition not total at ({}, {})", c.mor_name(g), c.mor_name(f)),
                    format!("{} . {}", c.mor_name(g), c.mor_name(f)),
                )),
                Some(h) if c.src(h) != c.src(f) || c.dst(h) != c.dst(g) => out.push(Violation::new(
                    "composite lands in the wrong hom-set",
                    format!("{} . {} = {}", c.mor_name(g), c.mor_name(f), c.mor_name(h)),
                )),
                _ => {}
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.dst(f));
        if c.compose(c.identity(b), f) != f || c.compose(f, c.identity(a)) != f {
            out.push(Violation::new("identity law", c.mor_name(f).to_string()));
        }
    }
    for f in c.morphisms() {
        for x in 0..c.num_objects() {
            for &g in c.hom(c.dst(f), Obj(x as u32)) {
                let gf = c.compose(g, f);
                for y in 0..c.num_objects() {
                    for &h in c.hom(Obj(x as u32), Obj(y as u32)) {
                        if c.compose(h, gf) != c.compose(c.compose(h, g), f) {
                            out.push(Violation::new(
                                "associativity",
                                format!(
                                    "({}, {}, {})",
                                    c.mor_name(h),
                                    c.mor_name(g),
                                    c.mor_name(f)
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

/// Outcome of [`is_cofiltered`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofiltered {
    Yes,
    Empty,
    NoSpan(Obj, Obj),
    NoFork(Mor, Mor),
}

impl Cofiltered {
    pub fn holds(&self) -> bool {
        matches!(self, Cofiltered::Yes)
    }

    pub fn describe<C: Category + ?Sized>(&self, c: &C) -> String {
        match self {
            Cofiltered::Yes => "cofiltered".into(),
            Cofiltered::Empty => "no objects".into(),
            Cofiltered::NoSpan(a, b) => {
                format!("objects {} and {} have no span", c.obj_name(*a), c.obj_name(*b))
            }
            Cofiltered::NoFork(f, g) => format!(
                "parallel pair {}, {} has no equalizing fork",
                c.mor_name(*f),
                c.mor_name(*g)
            ),
        }
    }
}

pub fn find_span<C: Category + ?Sized>(c: &C, a: Obj, b: Obj) -> Option<(Mor, Mor)> {
    for v in c.objects() {
        if let (Some(&f), Some(&g)) = (c.hom(v, a).first(), c.hom(v, b).first()) {
            return Some((f, g));
        }
    }
    None
}

pub fn find_fork<C: Category + ?Sized>(c: &C, f: Mor, g: Mor) -> Option<Mor> {
    let a = c.src(f);
    for v in c.objects() {
        for &h in c.hom(v, a) {
            if c.compose(f, h) == c.compose(g, h) {
                return Some(h);
            }
        }
    }
    None
}

pub fn is_cofiltered<C: Category + ?Sized>(c: &C) -> Cofiltered {
    if c.num_objects() == 0 {
        return Cofiltered::Empty;
    }
    for a in c.objects() {
        for b in c.objects() {
            if b < a {
                continue;
            }
            if find_span(c, a, b).is_none() {
                return Cofiltered::NoSpan(a, b);
            }
        }
    }
    for a in c.objects() {
        for b in c.objects() {
            let hom = c.hom(a, b);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    if find_fork(c, f, g).is_none() {
                        return Cofiltered::NoFork(f, g);
                    }
                }
            }
        }
    }
    Cofiltered::Yes
}

/// A functor between finite categories given by its object and morphism maps.
#[derive(Clone, Debug)]
pub struct FinFunctor<'a> {
    pub source: &'a FinCategory,
    pub target: &'a FinCategory,
    pub obj_map: Vec<Obj>,
    pub mor_map: Vec<Mor>,
}

impl FinFunctor<'_> {
    pub fn validate(&self) -> Vec<Violation> {
        let (s, t) = (self.source, self.target);
        let mut out = Vec::new();
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            out.push(Violation::new("functor maps are not total", ""));
            return out;
        }
        for a in s.objects() {
            if self.mor_map[s.identity(a).idx()] != t.identity(self.obj_map[a.idx()]) {
                out.push(Violation::new("identity not preserved", s.obj_name(a).to_string()));
            }
        }
        for f in s.morphisms() {
            let ff = self.mor_map[f.idx()];
            if t.src(ff) != self.obj_map[s.src(f).idx()] || t.dst(ff) != self.obj_map[s.dst(f).idx()] {
                out.push(Violation::new("endpoints not preserved", s.mor_name(f).to_string()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in s.morphisms() {
            for g in s.morphisms() {
                if let Some(gf) = s.try_compose(g, f) {
                    let lhs = self.mor_map[gf.idx()];
                    let rhs = t.compose(self.mor_map[g.idx()], self.mor_map[f.idx()]);
                    if lhs != rhs {
                        out.push(Violation::new(
                            "composition not preserved",
                            format!("({}, {})", s.mor_name(g), s.mor_name(f)),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// A cone over a diagram: vertex plus one leg per shape object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub vertex: Obj,
    pub legs: Vec<Mor>,
}

/// All cones over `d` in its target category, in lexicographic order.
pub fn cones(d: &FinFunctor<'_>) -> Vec<Cone> {
    let mut out = Vec::new();
    for v in d.target.objects() {
        let mut legs = Vec::with_capacity(d.source.num_objects());
        cone_dfs(d, v, &mut legs, &mut out);
    }
    out
}

fn cone_dfs(d: &FinFunctor<'_>, v: Obj, legs: &mut Vec<Mor>, out: &mut Vec<Cone>) {
    let (s, t) = (d.source, d.target);
    let k = legs.len();
    if k == s.num_objects() {
        out.push(Cone { vertex: v, legs: legs.clone() });
        return;
    }
    let x = Obj(k as u32);
    for &leg in t.hom(v, d.obj_map[k]) {
        legs.push(leg);
        let ok = s.morphisms().all(|delta| {
            let (a, b) = (s.src(delta), s.dst(delta));
            if a.idx() > k || b.idx() > k || (a != x && b != x) {
                return true;
            }
            t.compose(d.mor_map[delta.idx()], legs[a.idx()]) == legs[b.idx()]
        });
        if ok {
            cone_dfs(d, v, legs, out);
        }
        legs.pop();
    }
}

fn factorizations(d: &FinFunctor<'_>, k: &Cone, l: &Cone) -> usize {
    let t = d.target;
    t.hom(k.vertex, l.vertex)
        .iter()
        .filter(|&&h| l.legs.iter().zip(&k.legs).all(|(&ll, &kl)| t.compose(ll, h) == kl))
        .count()
}

/// A limit cone found by exhaustive search, or `None` when no cone is universal.
pub fn limit_of_finite_diagram(d: &FinFunctor<'_>) -> Option<Cone> {
    let all = cones(d);
    all.iter().find(|l| all.iter().all(|k| factorizations(d, k, l) == 1)).cloned()
}

/// Checks the universal property of `l` against every enumerated cone.
pub fn is_limit(d: &FinFunctor<'_>, l: &Cone) -> bool {
    cones(d).iter().all(|k| factorizations(d, k, l) == 1)
}

/// A finite preorder stored as a boolean table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPreorder {
    pub names: Vec<String>,
    le: Vec<bool>,
}

impl FinPreorder {
    /// Reflexive-transitive closure of the given relation.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(p, q) in pairs {
            le[p * n + q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        FinPreorder { names, le }
    }

    /// Builds from a full table, rejecting tables that are not reflexive and transitive.
    pub fn from_table(names: Vec<String>, le: Vec<bool>) -> Result<Self> {
        let p = FinPreorder { names, le };
        let n = p.len();
        if p.le.len() != n * n {
            return Err(Error::Invalid("preorder table has the wrong size".into()));
        }
        for i in 0..n {
            if !p.le(i, i) {
                return Err(Error::Invalid(format!("not reflexive at {}", p.names[i])));
            }
            for j in 0..n {
                for k in 0..n {
                    if p.le(i, j) && p.le(j, k) && !p.le(i, k) {
                        return Err(Error::Invalid(format!(
                            "not transitive at ({}, {}, {})",
                            p.names[i], p.names[j], p.names[k]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn anonymous(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let mut t = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                t[i * n + j] = le(i, j);
            }
        }
        FinPreorder { names: (0..n).map(|i| format!("p{i}")).collect(), le: t }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn le(&self, p: usize, q: usize) -> bool {
        self.le[p * self.names.len() + q]
    }

    pub fn is_upset(&self, s: &[bool]) -> bool {
        (0..self.len()).all(|p| !s[p] || (0..self.len()).all(|q| !self.le(p, q) || s[q]))
    }
}

/// A point map between two preorders; monotonicity is checked on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn is_monotone(&self, src: &FinPreorder, dst: &FinPreorder) -> Option<(usize, usize)> {
        for p in 0..src.len() {
            for q in 0..src.len() {
                if src.le(p, q) && !dst.le(self.map[p], self.map[q]) {
                    return Some((p, q));
                }
            }
        }
        None
    }
}

/// Least upward-closed superset of `s`.
pub fn upset_closure(p: &FinPreorder, s: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; p.len()];
    for &x in s {
        for (y, m) in mark.iter_mut().enumerate() {
            if p.le(x, y) {
                *m = true;
            }
        }
    }
    (0..p.len()).filter(|&y| mark[y]).collect()
}

/// One representative (the least index) of every maximal strongly connected class.
pub fn final_subset(p: &FinPreorder) -> Result<Vec<usize>> {
    if p.is_empty() {
        return Err(Error::EmptyPreorder);
    }
    let n = p.len();
    let mut out = Vec::new();
    for x in 0..n {
        let maximal = (0..n).all(|y| !p.le(x, y) || p.le(y, x));
        let least_in_class = (0..x).all(|y| !(p.le(x, y) && p.le(y, x)));
        if maximal && least_in_class {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn is_final(p: &FinPreorder, s: &[usize]) -> bool {
    (0..p.len()).all(|x| s.iter().any(|&t| p.le(x, t)))
}
