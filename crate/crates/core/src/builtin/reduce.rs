//! Anchored complexes cut down to the part generated by the anchor.
//!
//! A pair `(C, g)` with `g: head(C) → b` is joined by a complex morphism to
//! the sub-pair generated by the image of `ĝ: b → c_0`, and every morphism of
//! pairs restricts to a surjection between generated sub-pairs. Zig-zag
//! classes can therefore be computed on generated pairs alone.

use std::collections::HashMap;

use super::carrier::{Carrier, Kind};
use super::system::System;
use crate::budget::Budget;
use crate::complexes::TruncatedComplex;
use crate::error::Result;
use crate::fincat::{Category, Mor, Obj};
use crate::module::{elems, Elem, Module};

impl System {
    fn covers(&self, c: &Carrier, gens: impl IntoIterator<Item = u32>) -> bool {
        let mut hit = vec![false; c.n];
        for e in gens.into_iter().chain(self.kind.constants(c)) {
            hit[e as usize] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Whether the values of `m` generate its source object.
    pub fn is_generating(&self, m: Elem) -> bool {
        let c = self.carrier(m.src);
        self.covers(c, self.elem_map(m).iter().flat_map(|&e| self.endo.support(c.n, e)))
    }

    /// Whether the image of `ĝ` generates the head object `src(g)`.
    pub fn is_generating_head(&self, g: Mor) -> bool {
        let c = self.carrier(self.base().src(g));
        self.covers(c, self.kmap(g).iter().copied())
    }

    /// The generated sub-pair of `(c, g)`.
    pub fn reduce_pair(&self, c: &TruncatedComplex, g: Mor) -> (TruncatedComplex, Mor) {
        let cat = self.base();
        let b = cat.dst(g);
        let ghat = self.kmap(g);
        let sub0 = self.subobject(self.carrier(c.obj(0)), ghat.iter().copied());
        let o0 = sub0.obj.expect("subobjects of bounded objects are bounded");
        let g2 = self.mor(o0, b, &sub0.corestrict(ghat).expect("image lies in the subobject")).expect("corestriction is a map");
        let mut objs = vec![o0];
        let mut maps = Vec::new();
        let mut prev = sub0;
        for i in 1..=c.depth() {
            let amb = self.carrier(c.obj(i));
            let m = self.elem_map(c.arrow(i));
            let sub = self.subobject(amb, prev.incl.iter().flat_map(|&p| self.endo.support(amb.n, m[p as usize])));
            let o = sub.obj.expect("subobjects of bounded objects are bounded");
            // Φ(incl) is injective, so restricted values are found by inverting it
            let inv: HashMap<u32, u32> =
                self.endo.map(&sub.incl, amb.n).into_iter().enumerate().map(|(k, v)| (v, k as u32)).collect();
            let r: Vec<u32> = prev.incl.iter().map(|&p| inv[&m[p as usize]]).collect();
            maps.push(self.elem(o, objs[i - 1], &r).expect("restriction is a carrier map"));
            objs.push(o);
            prev = sub;
        }
        (TruncatedComplex { objs, maps }, g2)
    }

    /// Factors `m ∈ M(a,b)` as `m_S@f` with `m_S` generating and `f: a → S`
    /// the morphism whose carrier map is the inclusion of the generated `S`.
    pub fn reduce_elem(&self, m: Elem) -> (Elem, Mor) {
        let amb = self.carrier(m.src);
        let vals = self.elem_map(m);
        let sub = self.subobject(amb, vals.iter().flat_map(|&e| self.endo.support(amb.n, e)));
        let o = sub.obj.expect("subobjects of bounded objects are bounded");
        let inv: HashMap<u32, u32> =
            self.endo.map(&sub.incl, amb.n).into_iter().enumerate().map(|(k, v)| (v, k as u32)).collect();
        let r: Vec<u32> = vals.iter().map(|e| inv[e]).collect();
        let ms = self.elem(o, m.dst, &r).expect("restriction is a carrier map");
        let f = self.mor(m.src, o, &sub.incl).expect("inclusion is a carrier map");
        (ms, f)
    }

    /// Every generated pair of depth `n` anchored at `b`, in enumeration order.
    pub fn generating_pairs(&self, b: Obj, n: usize, budget: &Budget) -> Result<Vec<(TruncatedComplex, Mor)>> {
        let cat = self.base();
        let mut out = Vec::new();
        for a0 in cat.objects() {
            for &g in cat.hom(a0, b) {
                if self.is_generating_head(g) {
                    let mut acc = Vec::new();
                    self.extend_generating(TruncatedComplex::single(a0), n, budget, &mut acc)?;
                    out.extend(acc.into_iter().map(|c| (c, g)));
                }
            }
        }
        Ok(out)
    }

    fn extend_generating(&self, c: TruncatedComplex, n: usize, budget: &Budget, out: &mut Vec<TruncatedComplex>) -> Result<()> {
        if c.depth() == n {
            budget.charge(1, "enumerating generated pairs")?;
            out.push(c);
            return Ok(());
        }
        let last = c.last();
        for a in self.base().objects() {
            if self.carrier(a).n > self.generated_bound(self.carrier(last).n) {
                continue;
            }
            for m in elems(self, a, last) {
                if self.is_generating(m) {
                    self.extend_generating(c.extend(m), n, budget, out)?;
                }
            }
        }
        Ok(())
    }

    /// Largest object a map out of an `n`-element carrier can generate.
    fn generated_bound(&self, n: usize) -> usize {
        let arity = (0..self.endo.size(1) as u32).map(|e| self.endo.support(1, e).len()).max().unwrap_or(0).max(2);
        n * arity + self.kind.constants(&Carrier::chain(2)).len()
    }

    /// Objects `a` with a generating element of `M(a, b)`.
    pub fn generated_sources(&self, b: Obj) -> Vec<Obj> {
        self.base().objects().filter(|&a| elems(self, a, b).any(|m| self.is_generating(m))).collect()
    }

    /// The carrier chain map between generated pairs `p → q` fixing the anchors,
    /// if one exists; it is unique because everything is generated by the anchor.
    pub fn forced_map(&self, p: &(TruncatedComplex, Mor), q: &(TruncatedComplex, Mor)) -> Option<Vec<Vec<u32>>> {
        let (pc, qc) = (&p.0, &q.0);
        if pc.depth() != qc.depth() {
            return None;
        }
        let (ca, cb) = (self.carrier(pc.obj(0)), self.carrier(qc.obj(0)));
        let mut f0: Vec<Option<u32>> = vec![None; ca.n];
        for k in self.kind.constants(ca) {
            f0[k as usize] = Some(if k == 0 { 0 } else { cb.top() as u32 });
        }
        for (&x, &y) in self.kmap(p.1).iter().zip(self.kmap(q.1)) {
            match f0[x as usize] {
                Some(v) if v != y => return None,
                _ => f0[x as usize] = Some(y),
            }
        }
        let f0: Vec<u32> = f0.into_iter().collect::<Option<_>>()?;
        if !self.kind.is_hom(&f0, ca, cb) {
            return None;
        }
        let mut out = vec![f0];
        self.forced_dfs(pc, qc, &mut out).then_some(out)
    }

    fn forced_dfs(&self, pc: &TruncatedComplex, qc: &TruncatedComplex, out: &mut Vec<Vec<u32>>) -> bool {
        let i = out.len();
        if i > pc.depth() {
            return true;
        }
        for f in self.solve_layer(pc.arrow(i), qc.arrow(i), out.last().expect("built")) {
            out.push(f);
            if self.forced_dfs(pc, qc, out) {
                return true;
            }
            out.pop();
        }
        false
    }

    /// For set-based systems, the quotient of a generated pair identifying
    /// points with the same behaviour down to the last level. Every pair in
    /// a zig-zag class maps onto the same quotient, which is the terminal
    /// object of the class.
    pub fn behaviour_quotient(&self, p: &(TruncatedComplex, Mor)) -> Option<(TruncatedComplex, Mor)> {
        if self.kind != Kind::Set {
            return None;
        }
        let (c, g) = p;
        let n = c.depth();
        // class[i][x] for each level, built from the last level up
        let mut class: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        let mut sizes = vec![0usize; n + 1];
        sizes[n] = usize::from(self.carrier(c.obj(n)).n > 0);
        class[n] = vec![0; self.carrier(c.obj(n)).n];
        let mut shapes: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); n + 1];
        for i in (0..n).rev() {
            let below = self.carrier(c.obj(i + 1)).n;
            let m = self.elem_map(c.arrow(i + 1));
            let keys: Vec<(u32, Vec<u32>)> = m
                .iter()
                .map(|&e| {
                    let sh = self.endo.decode(below, e);
                    (sh.tag, sh.args[..sh.arity as usize].iter().map(|&y| class[i + 1][y as usize]).collect())
                })
                .collect();
            let mut distinct = keys.clone();
            distinct.sort();
            distinct.dedup();
            class[i] = keys.iter().map(|k| distinct.binary_search(k).expect("present") as u32).collect();
            sizes[i] = distinct.len();
            shapes[i] = distinct;
        }
        let objs: Vec<Obj> = sizes.iter().map(|&k| self.object_by_size(k)).collect::<Option<_>>()?;
        let maps = (1..=n)
            .map(|i| {
                let r: Vec<u32> =
                    shapes[i - 1].iter().map(|(tag, args)| self.endo.encode(sizes[i], *tag, args)).collect();
                self.elem(objs[i], objs[i - 1], &r)
            })
            .collect::<Option<Vec<_>>>()?;
        let ghat: Vec<u32> = self.kmap(*g).iter().map(|&x| class[0][x as usize]).collect();
        let g2 = self.mor(objs[0], self.base().dst(*g), &ghat)?;
        Some((TruncatedComplex { objs, maps }, g2))
    }
}
