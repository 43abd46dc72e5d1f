//! Witness constructions carried out on carriers rather than by search.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::carrier::{find_iso, Carrier};
use super::system::System;
use crate::complexes::{ComplexMorphism, TruncatedComplex};
use crate::fincat::{Category, Mor, Obj};
use crate::module::{elems_from, Elem, FlatFailure, FlatVerdict, Module};

/// Largest number of pairs a flatness check visits before switching to a seeded sample.
pub const FLAT_PAIR_CAP: usize = 200_000;
pub const SAMPLE_SEED: u64 = 0x5e1f_51;

/// A subobject of some carrier, named by a skeleton object when it fits the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sub {
    /// Skeleton object isomorphic to the subobject, if within bound.
    pub obj: Option<Obj>,
    /// Elements of the ambient carrier, listed along the skeleton labeling.
    pub incl: Vec<u32>,
    /// Position of each ambient element in the subobject.
    pub coinc: Vec<Option<u32>>,
    pub carrier: Carrier,
}

impl Sub {
    /// Corestriction of a map into the ambient carrier; `None` if it leaves the subobject.
    pub fn corestrict(&self, f: &[u32]) -> Option<Vec<u32>> {
        f.iter().map(|&y| self.coinc[y as usize]).collect()
    }
}

impl System {
    /// The subobject of `ambient` generated by `elems` together with the constants.
    pub fn subobject(&self, ambient: &Carrier, elems: impl IntoIterator<Item = u32>) -> Sub {
        let mut set = vec![false; ambient.n];
        for e in elems {
            set[e as usize] = true;
        }
        for c in self.kind.constants(ambient) {
            set[c as usize] = true;
        }
        let listed: Vec<u32> = (0..ambient.n as u32).filter(|&e| set[e as usize]).collect();
        let restricted = ambient.restrict(&listed);
        let (obj, incl, carrier) = if listed.len() <= self.bound {
            match find_iso(self.kind, self.carriers(), &restricted) {
                Some((i, iso)) => {
                    let mut incl = vec![0u32; listed.len()];
                    for (k, &p) in iso.iter().enumerate() {
                        incl[p as usize] = listed[k];
                    }
                    (Some(Obj(i as u32)), incl, self.carriers()[i].clone())
                }
                None => (None, listed, restricted),
            }
        } else {
            (None, listed, restricted)
        };
        let mut coinc = vec![None; ambient.n];
        for (i, &e) in incl.iter().enumerate() {
            coinc[e as usize] = Some(i as u32);
        }
        Sub { obj, incl, coinc, carrier }
    }

    /// Flatness of `M(a,-)` with witnesses built from images in `Φa`.
    ///
    /// Spans come from the joint image of the two elements, forks from the image
    /// of the first. Witnesses larger than the bound are counted, not dropped.
    pub fn flat_check(&self, a: Obj) -> FlatVerdict {
        let all = elems_from(self, a);
        let mut verdict = FlatVerdict { failure: None, beyond_bound: 0, checked_pairs: 0, sampled: false };
        if all.is_empty() {
            verdict.failure = Some(FlatFailure::NoElement { a });
            return verdict;
        }
        let phi = self.phi_carrier(a).clone();
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let n = all.len();
        let pairs: Vec<(usize, usize)> = if n * (n + 1) / 2 <= FLAT_PAIR_CAP {
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
        } else {
            verdict.sampled = true;
            (0..FLAT_PAIR_CAP).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        for (i, j) in pairs {
            verdict.checked_pairs += 1;
            let (m1, m2) = (all[i], all[j]);
            let sub = self.subobject(&phi, self.elem_map(m1).iter().chain(self.elem_map(m2)).copied());
            match self.span_holds(a, &sub, m1, m2) {
                Some(true) => {}
                Some(false) => {
                    verdict.failure = Some(FlatFailure::NoSpan { m1, m2 });
                    return verdict;
                }
                None => verdict.beyond_bound += 1,
            }
        }
        let mut order = all.clone();
        order.shuffle(&mut rng);
        let c = self.base();
        let mut visited = 0usize;
        'outer: for &m1 in &order {
            let sub = self.subobject(&phi, self.elem_map(m1).iter().copied());
            let Some(b0) = sub.obj else {
                verdict.beyond_bound += 1;
                continue;
            };
            let e = self.elem(a, b0, &sub.incl).expect("inclusion is a carrier map");
            let fhat = sub.corestrict(self.elem_map(m1)).expect("image contains values");
            let Some(f) = self.mor(b0, m1.dst, &fhat) else {
                verdict.failure = Some(FlatFailure::NoElement { a });
                return verdict;
            };
            if self.ract(f, e) != m1 {
                verdict.failure = Some(FlatFailure::NoSpan { m1, m2: m1 });
                return verdict;
            }
            for b2 in c.objects() {
                let hom = c.hom(m1.dst, b2);
                let acted: Vec<Elem> = hom.iter().map(|&u| self.ract(u, m1)).collect();
                for x in 0..hom.len() {
                    for y in x + 1..hom.len() {
                        if acted[x] != acted[y] {
                            continue;
                        }
                        visited += 1;
                        verdict.checked_pairs += 1;
                        if c.compose(hom[x], f) != c.compose(hom[y], f) {
                            verdict.failure = Some(FlatFailure::NoFork { m1, u: hom[x], v: hom[y] });
                            return verdict;
                        }
                        if visited >= FLAT_PAIR_CAP {
                            verdict.sampled = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        verdict
    }

    /// Checks the span through the generated subobject; `None` when it exceeds the bound.
    fn span_holds(&self, a: Obj, sub: &Sub, m1: Elem, m2: Elem) -> Option<bool> {
        let b0 = sub.obj?;
        let e = self.elem(a, b0, &sub.incl)?;
        let ok = [m1, m2].iter().all(|&m| {
            let ghat = sub.corestrict(self.elem_map(m)).expect("image covers values");
            match self.mor(b0, m.dst, &ghat) {
                Some(g) => self.ract(g, e) == m,
                None => false,
            }
        });
        Some(ok)
    }

    /// All complex morphisms `src → dst`, solving each layer on carriers.
    ///
    /// Component `f_i` is found through its carrier map `F_i: a'_i → a_i` from
    /// `Φ(F_i) ∘ m'_i = m_i ∘ F_{i-1}`.
    pub fn chain_maps(&self, src: &TruncatedComplex, dst: &TruncatedComplex, head: Option<Mor>) -> Vec<ComplexMorphism> {
        self.chain_maps_limited(src, dst, head, usize::MAX)
    }

    /// As [`System::chain_maps`], stopping after `limit` morphisms.
    pub fn chain_maps_limited(
        &self,
        src: &TruncatedComplex,
        dst: &TruncatedComplex,
        head: Option<Mor>,
        limit: usize,
    ) -> Vec<ComplexMorphism> {
        let c = self.base();
        let heads: Vec<Mor> = match head {
            Some(h) => vec![h],
            None => c.hom(src.head(), dst.head()).to_vec(),
        };
        let mut out = Vec::new();
        for h in heads {
            let mut comps = vec![h];
            self.chain_dfs(src, dst, &mut comps, &mut out, limit);
            if out.len() >= limit {
                break;
            }
        }
        out
    }

    fn chain_dfs(
        &self,
        src: &TruncatedComplex,
        dst: &TruncatedComplex,
        comps: &mut Vec<Mor>,
        out: &mut Vec<ComplexMorphism>,
        limit: usize,
    ) {
        let i = comps.len();
        if out.len() >= limit {
            return;
        }
        if i == src.objs.len() {
            out.push(ComplexMorphism { comps: comps.clone() });
            return;
        }
        let prev = self.kmap(comps[i - 1]).to_vec();
        for f in self.solve_layer(dst.arrow(i), src.arrow(i), &prev) {
            let mor = self.mor(src.obj(i), dst.obj(i), &f).expect("solutions are carrier maps");
            comps.push(mor);
            self.chain_dfs(src, dst, comps, out, limit);
            comps.pop();
        }
    }

    /// Every carrier map `F` with `Φ(F) ∘ m' = m ∘ prev`, where `m' ∈ M(a',b')`,
    /// `m ∈ M(a,b)` and `prev: b' → b`.
    pub fn solve_layer(&self, m_dst: Elem, m_src: Elem, prev: &[u32]) -> Vec<Vec<u32>> {
        let ca = self.carrier(m_dst.src);
        let cb = self.carrier(m_src.src);
        let md = self.elem_map(m_dst);
        let ms = self.elem_map(m_src);
        let mut partial: Vec<Option<u32>> = vec![None; ca.n];
        for k in self.kind.constants(ca) {
            partial[k as usize] = Some(if k == 0 { 0 } else { cb.top() as u32 });
        }
        let mut out = Vec::new();
        self.layer_dfs(0, md, ms, prev, ca.n, cb.n, &mut partial, &mut out);
        out.retain(|f| self.kind.is_hom(f, ca, cb));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn layer_dfs(
        &self,
        y: usize,
        md: &[u32],
        ms: &[u32],
        prev: &[u32],
        na: usize,
        nb: usize,
        partial: &mut Vec<Option<u32>>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if y == md.len() {
            let free: Vec<usize> = (0..na).filter(|&x| partial[x].is_none()).collect();
            let total = (nb as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut f: Vec<u32> = partial.iter().map(|v| v.unwrap_or(0)).collect();
                let mut c = code;
                for &x in &free {
                    f[x] = (c % nb as u64) as u32;
                    c /= nb as u64;
                }
                out.push(f);
            }
            return;
        }
        let target = ms[prev[y] as usize];
        for assign in self.endo.solve(na, nb, md[y], target, partial) {
            for &(x, v) in &assign {
                partial[x as usize] = Some(v);
            }
            self.layer_dfs(y + 1, md, ms, prev, na, nb, partial, out);
            for &(x, _) in &assign {
                partial[x as usize] = None;
            }
        }
    }
}
