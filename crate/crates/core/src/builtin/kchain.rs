//! Complexes seen on carriers: `m_i: a_{i-1} → Φ(a_i)` as plain maps.
//!
//! A morphism of complexes `C → D` in the base is a chain of carrier maps
//! `F_i: d_i → c_i` running the other way. Objects need not fit the bound.

use super::carrier::{find_iso, Carrier, Kind};
use super::system::System;
use crate::complexes::{ComplexMorphism, TruncatedComplex};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KChain {
    pub objs: Vec<Carrier>,
    /// `maps[i-1] = m_i: objs[i-1] → Φ(objs[i])`.
    pub maps: Vec<Vec<u32>>,
}

impl KChain {
    pub fn depth(&self) -> usize {
        self.maps.len()
    }

    pub fn truncate(&self, k: usize) -> KChain {
        KChain { objs: self.objs[..=k].to_vec(), maps: self.maps[..k].to_vec() }
    }

    pub fn max_size(&self) -> usize {
        self.objs.iter().map(|c| c.n).max().unwrap_or(0)
    }
}

/// Carrier maps `F_i: src_i → dst_i`, one per level.
pub type KMap = Vec<Vec<u32>>;

pub fn compose_kmaps(g: &KMap, f: &KMap) -> KMap {
    g.iter().zip(f).map(|(gi, fi)| fi.iter().map(|&x| gi[x as usize]).collect()).collect()
}

/// A cone over two complexes built on carriers, with legs as carrier chain maps
/// out of the given complexes.
#[derive(Clone, Debug)]
pub struct KCone {
    pub vertex: KChain,
    pub legs: Vec<KMap>,
}

impl System {
    pub fn kchain(&self, c: &TruncatedComplex) -> KChain {
        KChain {
            objs: c.objs.iter().map(|&a| self.carrier(a).clone()).collect(),
            maps: c.maps.iter().map(|&m| self.elem_map(m).to_vec()).collect(),
        }
    }

    /// Carrier maps of a complex morphism, `F_i: dst_i → src_i`.
    pub fn kmorphism(&self, f: &ComplexMorphism) -> KMap {
        f.comps.iter().map(|&g| self.kmap(g).to_vec()).collect()
    }

    /// The skeletal complex isomorphic to `k`, with the level isomorphisms
    /// `iso_i: k_i → skeleton`. `None` when some level exceeds the bound.
    pub fn complex_of(&self, k: &KChain) -> Option<(TruncatedComplex, KMap)> {
        let mut objs = Vec::new();
        let mut isos: KMap = Vec::new();
        for c in &k.objs {
            if c.n > self.bound {
                return None;
            }
            let (i, iso) = find_iso(self.kind, self.carriers(), c)?;
            objs.push(crate::fincat::Obj(i as u32));
            isos.push(iso);
        }
        let mut maps = Vec::new();
        for i in 1..=k.depth() {
            let inv = invert(&isos[i - 1]);
            let m: Vec<u32> = inv
                .iter()
                .map(|&x| self.endo.map_elem(&isos[i], isos[i].len(), k.maps[i - 1][x as usize]))
                .collect();
            maps.push(self.elem(objs[i], objs[i - 1], &m)?);
        }
        Some((TruncatedComplex { objs, maps }, isos))
    }

    /// Turns carrier maps `F_i: dst_i → src_i` between skeletal complexes into a complex morphism.
    pub fn morphism_of(&self, src: &TruncatedComplex, dst: &TruncatedComplex, f: &KMap) -> Option<ComplexMorphism> {
        let comps = (0..src.objs.len())
            .map(|i| self.mor(src.obj(i), dst.obj(i), &f[i]))
            .collect::<Option<Vec<_>>>()?;
        Some(ComplexMorphism { comps })
    }

    /// Whether `f: x → y` is a chain of carrier maps commuting with the arrows:
    /// `Φ(F_i) ∘ x.m_i = y.m_i ∘ F_{i-1}`.
    pub fn is_kchain_map(&self, x: &KChain, y: &KChain, f: &KMap) -> bool {
        if x.depth() != y.depth() || f.len() != x.objs.len() {
            return false;
        }
        for i in 0..f.len() {
            if !self.kind.is_hom(&f[i], &x.objs[i], &y.objs[i]) {
                return false;
            }
        }
        for i in 1..f.len() {
            let ny = y.objs[i].n;
            for (p, &e) in x.maps[i - 1].iter().enumerate() {
                let lhs = self.endo.map_elem(&f[i], ny, e);
                let rhs = y.maps[i - 1][f[i - 1][p] as usize];
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// A carrier every carrier maps to, with the map from `c`.
    pub fn weak_terminal(&self, c: &Carrier) -> (Carrier, Vec<u32>) {
        match self.kind {
            Kind::Set | Kind::Lin => (Carrier::chain(1), vec![0; c.n]),
            Kind::Pos01 => (Carrier::chain(2), (0..c.n).map(|x| u32::from(x != 0)).collect()),
        }
    }

    /// Levelwise descent from a chosen deepest layer: each shallower object is
    /// the subobject of `Φ(next)` generated by the images of the given arrows
    /// pushed along the legs.
    fn descend(&self, sources: &[&KChain], mut deepest: (Carrier, Vec<Vec<u32>>), n: usize) -> KCone {
        let mut objs = vec![Carrier::discrete(0); n + 1];
        let mut maps = vec![Vec::new(); n];
        let mut legs: Vec<KMap> = vec![vec![Vec::new(); n + 1]; sources.len()];
        objs[n] = deepest.0.clone();
        for (j, l) in deepest.1.drain(..).enumerate() {
            legs[j][n] = l;
        }
        for i in (1..=n).rev() {
            let phi = self.endo.carrier(&objs[i]);
            let pushed: Vec<Vec<u32>> = sources
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    s.maps[i - 1].iter().map(|&e| self.endo.map_elem(&legs[j][i], objs[i].n, e)).collect()
                })
                .collect();
            let sub = self.subobject(&phi, pushed.iter().flatten().copied());
            maps[i - 1] = sub.incl.clone();
            objs[i - 1] = sub.carrier.clone();
            for (j, p) in pushed.iter().enumerate() {
                legs[j][i - 1] = sub.corestrict(p).expect("generated subobject covers images");
            }
        }
        KCone { vertex: KChain { objs, maps }, legs }
    }

    /// A span over `x` and `y`: weak terminal at the deepest level, then joint images.
    pub fn span_cone(&self, x: &KChain, y: &KChain) -> KCone {
        let n = x.depth();
        let (t, fx) = self.weak_terminal(&x.objs[n]);
        let (_, fy) = self.weak_terminal(&y.objs[n]);
        self.descend(&[x, y], (t, vec![fx, fy]), n)
    }

    /// A fork for the parallel pair with carrier maps `u, v: y → x`: the
    /// coequalizer at the deepest level, then images. `None` if that
    /// coequalizer does not exist.
    pub fn fork_cone(&self, x: &KChain, y: &KChain, u: &KMap, v: &KMap) -> Option<KCone> {
        let n = x.depth();
        let pairs: Vec<(u32, u32)> = (0..y.objs[n].n).map(|p| (u[n][p], v[n][p])).collect();
        let (q, qmap) = self.kind.quotient(&x.objs[n], &pairs)?;
        Some(self.descend(&[x], (q, vec![qmap]), n))
    }

    /// The levelwise coequalizer of `u, v: y → x`, which every fork factors through.
    pub fn coequalizer_cone(&self, x: &KChain, y: &KChain, u: &KMap, v: &KMap) -> Option<KCone> {
        let n = x.depth();
        let mut objs = Vec::new();
        let mut qs: KMap = Vec::new();
        for i in 0..=n {
            let pairs: Vec<(u32, u32)> = (0..y.objs[i].n).map(|p| (u[i][p], v[i][p])).collect();
            let (q, qm) = self.kind.quotient(&x.objs[i], &pairs)?;
            objs.push(q);
            qs.push(qm);
        }
        let mut maps = Vec::new();
        for i in 1..=n {
            let mut m = vec![u32::MAX; objs[i - 1].n];
            for (p, &e) in x.maps[i - 1].iter().enumerate() {
                let img = self.endo.map_elem(&qs[i], objs[i].n, e);
                let slot = &mut m[qs[i - 1][p] as usize];
                if *slot != u32::MAX && *slot != img {
                    return None;
                }
                *slot = img;
            }
            maps.push(m);
        }
        let vertex = KChain { objs, maps };
        let cone = KCone { vertex, legs: vec![qs] };
        self.is_kchain_map(x, &cone.vertex, &cone.legs[0]).then_some(cone)
    }

    /// The levelwise coproduct of two complexes, through which every span factors.
    /// Bounded posets glue the two bottoms and the two tops.
    pub fn coproduct_cone(&self, x: &KChain, y: &KChain) -> Option<KCone> {
        if self.kind == Kind::Lin {
            return None;
        }
        let n = x.depth();
        let mut objs = Vec::new();
        let mut inl: KMap = Vec::new();
        let mut inr: KMap = Vec::new();
        for i in 0..=n {
            let (a, b) = (&x.objs[i], &y.objs[i]);
            match self.kind {
                Kind::Set => {
                    objs.push(Carrier::discrete(a.n + b.n));
                    inl.push((0..a.n as u32).collect());
                    inr.push((0..b.n as u32).map(|p| p + a.n as u32).collect());
                }
                _ => {
                    // a's middle, then b's middle, bottom 0 and top last
                    let total = a.n + b.n - 2;
                    let l: Vec<u32> = (0..a.n).map(|p| if p + 1 == a.n { total as u32 - 1 } else { p as u32 }).collect();
                    let r: Vec<u32> = (0..b.n)
                        .map(|p| {
                            if p == 0 {
                                0
                            } else if p + 1 == b.n {
                                total as u32 - 1
                            } else {
                                (a.n - 1 + p - 1) as u32
                            }
                        })
                        .collect();
                    let c = Carrier::from_fn(total, |s, t| {
                        if s == 0 || t + 1 == total || s == t {
                            return true;
                        }
                        if t == 0 || s + 1 == total {
                            return false;
                        }
                        let in_a = |z: usize| z < a.n - 1;
                        match (in_a(s), in_a(t)) {
                            (true, true) => a.le(s, t),
                            (false, false) => b.le(s + 2 - a.n, t + 2 - a.n),
                            _ => false,
                        }
                    });
                    objs.push(c);
                    inl.push(l);
                    inr.push(r);
                }
            }
        }
        let mut maps = Vec::new();
        for i in 1..=n {
            let mut m = vec![u32::MAX; objs[i - 1].n];
            for (src, inj) in [(x, &inl), (y, &inr)] {
                for (p, &e) in src.maps[i - 1].iter().enumerate() {
                    let img = self.endo.map_elem(&inj[i], objs[i].n, e);
                    let slot = &mut m[inj[i - 1][p] as usize];
                    if *slot != u32::MAX && *slot != img {
                        return None;
                    }
                    *slot = img;
                }
            }
            maps.push(m);
        }
        Some(KCone { vertex: KChain { objs, maps }, legs: vec![inl, inr] })
    }

    /// Whether `cone` is a cone over `sources` on carriers.
    pub fn is_kcone(&self, sources: &[&KChain], cone: &KCone) -> bool {
        cone.legs.len() == sources.len()
            && sources.iter().zip(&cone.legs).all(|(s, l)| self.is_kchain_map(s, &cone.vertex, l))
    }

    /// The factorization of `cone` through a coproduct or coequalizer cone: the
    /// carrier chain map `t: limit.vertex → cone.vertex` with `t ∘ limit.leg_j = cone.leg_j`.
    pub fn factor_through(&self, limit: &KCone, cone: &KCone) -> Option<KMap> {
        let n = limit.vertex.depth();
        let mut t: KMap = Vec::new();
        for i in 0..=n {
            let mut ti = vec![u32::MAX; limit.vertex.objs[i].n];
            for (lj, cj) in limit.legs.iter().zip(&cone.legs) {
                for (p, &q) in lj[i].iter().enumerate() {
                    let slot = &mut ti[q as usize];
                    if *slot != u32::MAX && *slot != cj[i][p] {
                        return None;
                    }
                    *slot = cj[i][p];
                }
            }
            if ti.contains(&u32::MAX) {
                return None;
            }
            t.push(ti);
        }
        let ok = self.is_kchain_map(&limit.vertex, &cone.vertex, &t)
            && limit.legs.iter().zip(&cone.legs).all(|(l, c)| compose_kmaps(&t, l) == *c);
        ok.then_some(t)
    }
}

pub fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}
