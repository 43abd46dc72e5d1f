use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::carrier::{skeleton, Carrier, Kind};
use super::endo::Endo;
use crate::error::{Error, Result};
use crate::fincat::{Category, CategoryBuilder, FinCategory, Mor, Obj};
use crate::module::{Elem, Module};

#[derive(Debug, Default)]
struct ElemTable {
    maps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

/// A builtin system: the base `A = K_fp^op` cut at `bound` elements, with
/// `M(a,b) = K(b, Φa)`.
///
/// An `A`-morphism `a → b` is stored as its carrier map `b → a`. The left action
/// of `f: a' → a` on `m` is `Φ(f̂) ∘ m`; the right action of `g: b → b'` is `m ∘ ĝ`.
#[derive(Debug)]
pub struct System {
    pub kind: Kind,
    pub endo: Endo,
    pub bound: usize,
    key: String,
    objects: Vec<Carrier>,
    phi: Vec<Carrier>,
    cat: Arc<FinCategory>,
    kmaps: Vec<Vec<u32>>,
    mor_lookup: HashMap<(u32, u32, Vec<u32>), Mor>,
    tables: Vec<OnceLock<ElemTable>>,
}

impl System {
    pub fn new(kind: Kind, endo: Endo, bound: usize, key: &str) -> System {
        let objects = skeleton(kind, bound);
        let names = object_names(kind, &objects);
        let no = objects.len();
        let mut b = CategoryBuilder::new(key);
        for nm in &names {
            b.object(nm).expect("distinct skeleton names");
        }
        let mut kmaps = Vec::new();
        let mut keys = Vec::new();
        for a in 0..no {
            for bb in 0..no {
                for h in kind.homs(&objects[bb], &objects[a]) {
                    let is_id = a == bb && h.iter().enumerate().all(|(i, &v)| i as u32 == v);
                    if is_id {
                        continue;
                    }
                    let name = format!("{}->{}:{}", names[a], names[bb], fmt_map(&h));
                    b.morphism(&name, Obj(a as u32), Obj(bb as u32)).expect("fresh");
                    keys.push((a as u32, bb as u32, h.clone()));
                    kmaps.push(h);
                }
            }
        }
        let n_user = kmaps.len();
        let dsts: Vec<u32> = keys.iter().map(|k| k.1).collect();
        let mut mor_lookup = HashMap::new();
        for (i, k) in keys.into_iter().enumerate() {
            mor_lookup.insert(k, Mor(i as u32));
        }
        for (a, c) in objects.iter().enumerate() {
            let id: Vec<u32> = (0..c.n as u32).collect();
            mor_lookup.insert((a as u32, a as u32, id.clone()), Mor((n_user + a) as u32));
            kmaps.push(id);
        }
        let mut srcs: Vec<Vec<usize>> = vec![Vec::new(); no];
        for (k, &m) in &mor_lookup {
            if m.idx() < n_user {
                srcs[k.0 as usize].push(m.idx());
            }
        }
        for (k, &m) in &mor_lookup {
            if m.idx() >= n_user {
                continue;
            }
            let (a, bb) = (k.0 as usize, k.1 as usize);
            let fhat = &k.2;
            for &g in &srcs[bb] {
                let ghat = &kmaps[g];
                let c = dsts[g];
                let comp: Vec<u32> = ghat.iter().map(|&z| fhat[z as usize]).collect();
                let h = mor_lookup[&(a as u32, c, comp)];
                b.compose(Mor(g as u32), m, h);
            }
        }
        let cat = Arc::new(b.build());
        let phi = objects.iter().map(|c| endo.carrier(c)).collect();
        let tables = (0..no * no).map(|_| OnceLock::new()).collect();
        System { kind, endo, bound, key: key.to_string(), objects, phi, cat, kmaps, mor_lookup, tables }
    }

    pub fn streams(alphabet: u32, bound: usize) -> System {
        System::new(
            Kind::Set,
            Endo::Streams { alphabet },
            bound,
            &format!("streams(alphabet={alphabet},bound={bound})"),
        )
    }

    pub fn trees(labels: u32, bound: usize) -> System {
        System::new(Kind::Set, Endo::Trees { labels }, bound, &format!("trees(labels={labels},bound={bound})"))
    }

    pub fn freyd(bound: usize) -> System {
        System::new(Kind::Pos01, Endo::Smash, bound, &format!("freyd(bound={bound})"))
    }

    /// `top = false` selects `X ↦ X*ω`, `top = true` selects `X ↦ (X*ω);1`.
    pub fn lin(top: bool, bound: usize, height: u32) -> System {
        let f = if top { "(x*w);1" } else { "x*w" };
        System::new(
            Kind::Lin,
            Endo::LinOmega { height, top },
            bound,
            &format!("lin(functor={f},bound={bound},height={height})"),
        )
    }

    /// Parses `streams(alphabet=2,bound=4)` and friends, with or without the `builtin:` prefix.
    pub fn from_key(key: &str) -> Result<System> {
        let key = key.trim().strip_prefix("builtin:").unwrap_or(key.trim());
        let (name, rest) = key.split_once('(').unwrap_or((key, ")"));
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Invalid(format!("unterminated builtin parameters in `{key}`")))?;
        let mut params: HashMap<String, String> = HashMap::new();
        for kv in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("parameter `{kv}` is not key=value")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |k: &str, d: usize| -> Result<usize> {
            match params.get(k) {
                None => Ok(d),
                Some(v) => v.parse().map_err(|_| Error::Invalid(format!("parameter {k}={v} is not a number"))),
            }
        };
        let known = |allowed: &[&str]| -> Result<()> {
            for k in params.keys() {
                if !allowed.contains(&k.as_str()) {
                    return Err(Error::Invalid(format!("unknown parameter `{k}` for builtin {name}")));
                }
            }
            Ok(())
        };
        match name {
            "streams" => {
                known(&["alphabet", "bound"])?;
                Ok(System::streams(num("alphabet", 2)? as u32, num("bound", 4)?))
            }
            "trees" => {
                known(&["labels", "bound"])?;
                Ok(System::trees(num("labels", 1)? as u32, num("bound", 4)?))
            }
            "freyd" => {
                known(&["bound"])?;
                let b = num("bound", 4)?;
                if !(2..=6).contains(&b) {
                    return Err(Error::Invalid("freyd bound must lie in 2..=6".into()));
                }
                Ok(System::freyd(b))
            }
            "lin" => {
                known(&["functor", "bound", "height"])?;
                let top = match params.get("functor").map(String::as_str) {
                    None | Some("x*w") => false,
                    Some("(x*w);1") | Some("x*w;1") => true,
                    Some(other) => return Err(Error::Invalid(format!("unknown lin functor `{other}`"))),
                };
                Ok(System::lin(top, num("bound", 4)?, num("height", 3)? as u32))
            }
            other => Err(Error::Unknown(format!("builtin:{other}"))),
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn cat_arc(&self) -> Arc<FinCategory> {
        self.cat.clone()
    }

    pub fn carrier(&self, a: Obj) -> &Carrier {
        &self.objects[a.idx()]
    }

    pub fn carriers(&self) -> &[Carrier] {
        &self.objects
    }

    pub fn phi_carrier(&self, a: Obj) -> &Carrier {
        &self.phi[a.idx()]
    }

    /// Carrier map `b → a` underlying the `A`-morphism `f: a → b`.
    pub fn kmap(&self, f: Mor) -> &[u32] {
        &self.kmaps[f.idx()]
    }

    /// The `A`-morphism `a → b` whose carrier map `b → a` is `h`.
    pub fn mor(&self, a: Obj, b: Obj, h: &[u32]) -> Option<Mor> {
        self.mor_lookup.get(&(a.0, b.0, h.to_vec())).copied()
    }

    /// Carrier map `b → Φa` of `m ∈ M(a,b)`.
    pub fn elem_map(&self, m: Elem) -> &[u32] {
        &self.table(m.src, m.dst).maps[m.idx as usize]
    }

    pub fn elem(&self, a: Obj, b: Obj, map: &[u32]) -> Option<Elem> {
        self.table(a, b).index.get(map).map(|&idx| Elem { src: a, dst: b, idx })
    }

    fn table(&self, a: Obj, b: Obj) -> &ElemTable {
        let n = self.objects.len();
        self.tables[a.idx() * n + b.idx()].get_or_init(|| {
            let maps = self.kind.homs(&self.objects[b.idx()], &self.phi[a.idx()]);
            let index = maps.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
            ElemTable { maps, index }
        })
    }

    pub fn object_by_size(&self, n: usize) -> Option<Obj> {
        self.objects.iter().position(|c| c.n == n && (self.kind != Kind::Pos01 || c.is_chain())).map(|i| Obj(i as u32))
    }
}

pub fn fmt_map(h: &[u32]) -> String {
    let parts: Vec<String> = h.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn object_names(kind: Kind, objects: &[Carrier]) -> Vec<String> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    objects
        .iter()
        .map(|c| match kind {
            Kind::Set | Kind::Lin => c.n.to_string(),
            Kind::Pos01 if c.is_chain() => c.n.to_string(),
            Kind::Pos01 => {
                let k = counts.entry(c.n).or_insert(0);
                *k += 1;
                format!("P{}_{}", c.n, k)
            }
        })
        .collect()
}

impl Module for System {
    fn name(&self) -> &str {
        &self.key
    }
    fn base(&self) -> &FinCategory {
        &self.cat
    }
    fn count(&self, a: Obj, b: Obj) -> usize {
        self.table(a, b).maps.len()
    }
    fn try_lact(&self, m: Elem, f: Mor) -> Option<Elem> {
        let a2 = self.cat.src(f);
        if self.cat.dst(f) != m.src {
            return None;
        }
        let fhat = self.kmap(f);
        let na2 = self.objects[a2.idx()].n;
        let map: Vec<u32> = self.elem_map(m).iter().map(|&e| self.endo.map_elem(fhat, na2, e)).collect();
        self.elem(a2, m.dst, &map)
    }
    fn try_ract(&self, g: Mor, m: Elem) -> Option<Elem> {
        if self.cat.src(g) != m.dst {
            return None;
        }
        let b2 = self.cat.dst(g);
        let mm = self.elem_map(m);
        let map: Vec<u32> = self.kmap(g).iter().map(|&z| mm[z as usize]).collect();
        self.elem(m.src, b2, &map)
    }
    fn label(&self, m: Elem) -> String {
        let na = self.objects[m.src.idx()].n;
        let parts: Vec<String> = self.elem_map(m).iter().map(|&e| self.endo.elem_name(na, e)).collect();
        format!("<{}>", parts.join(","))
    }
    fn bound(&self) -> Option<usize> {
        Some(self.bound)
    }
    fn concrete(&self) -> Option<&System> {
        Some(self)
    }
}
