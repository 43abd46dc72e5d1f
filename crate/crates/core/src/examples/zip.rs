//! Interleaving of eventually constant streams as a coalgebra for the
//! stream module, solved into the final approximation at the one-point anchor.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::builtin::System;
use crate::complexes::TruncatedComplex;
use crate::error::{Error, Result};
use crate::finalcoalg::solve;
use crate::fincat::{Category, Mor};
use crate::module::{Coalgebra, CoendPair, FinSetFunctor, Module};

/// `prefix` followed by `tail` forever; kept normalized (the prefix never
/// ends with the tail letter).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyConstant {
    pub prefix: Vec<u32>,
    pub tail: u32,
}

impl EventuallyConstant {
    pub fn new(mut prefix: Vec<u32>, tail: u32) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        EventuallyConstant { prefix, tail }
    }

    pub fn head(&self) -> u32 {
        self.prefix.first().copied().unwrap_or(self.tail)
    }

    pub fn rest(&self) -> Self {
        if self.prefix.is_empty() {
            self.clone()
        } else {
            EventuallyConstant::new(self.prefix[1..].to_vec(), self.tail)
        }
    }

    pub fn take(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.prefix.get(i).copied().unwrap_or(self.tail)).collect()
    }

    pub fn render(&self) -> String {
        let p: Vec<String> = self.prefix.iter().map(u32::to_string).collect();
        format!("{}({})^w", p.join(""), self.tail)
    }
}

/// Direct interleaving `s₀, t₀, s₁, t₁, …`.
pub fn interleave(s: &EventuallyConstant, t: &EventuallyConstant, n: usize) -> Vec<u32> {
    let (a, b) = (s.take(n), t.take(n));
    (0..n).map(|i| if i % 2 == 0 { a[i / 2] } else { b[i / 2] }).collect()
}

/// The zip coalgebra on the states reachable from `starts`:
/// `(s, t) ↦ (s₀, (t, s'))`, with the same states over every object.
pub fn zip_coalgebra(
    sys: &System,
    starts: &[(EventuallyConstant, EventuallyConstant)],
) -> Result<(Coalgebra, Vec<(EventuallyConstant, EventuallyConstant)>)> {
    let mut states = Vec::new();
    let mut index = HashMap::new();
    let mut queue: Vec<_> = starts.to_vec();
    while let Some(st) = queue.pop() {
        if index.contains_key(&st) {
            continue;
        }
        index.insert(st.clone(), states.len());
        let next = (st.1.clone(), st.0.rest());
        states.push(st);
        queue.push(next);
    }
    let c = sys.base();
    let labels: Vec<String> = states.iter().map(|(s, t)| format!("{}|{}", s.render(), t.render())).collect();
    let mut x = FinSetFunctor::new("zip", sys.cat_arc(), c.objects().map(|_| labels.clone()).collect());
    let ident: Vec<usize> = (0..states.len()).collect();
    for row in &mut x.action {
        *row = ident.clone();
    }
    let mut structure = Vec::new();
    for b in c.objects() {
        let n = sys.carrier(b).n;
        let mut row = Vec::new();
        for (s, t) in &states {
            let letter = s.head();
            let map: Vec<u32> = (0..n as u32).map(|y| sys.endo.encode(n, letter, &[y])).collect();
            let m = sys
                .elem(b, b, &map)
                .ok_or_else(|| Error::Invalid(format!("letter {letter} is outside the alphabet")))?;
            row.push(CoendPair { m, x: index[&(t.clone(), s.rest())] });
        }
        structure.push(row);
    }
    Ok((Coalgebra { name: "zip".into(), carrier: x, structure }, states))
}

/// Letters read from a stream complex starting at the anchor point.
pub fn stream_prefix(sys: &System, c: &TruncatedComplex, g: Mor) -> Vec<u32> {
    let mut cur = sys.kmap(g)[0];
    let mut out = Vec::new();
    for i in 1..=c.depth() {
        let sh = sys.endo.decode(sys.carrier(c.obj(i)).n, sys.elem_map(c.arrow(i))[cur as usize]);
        out.push(sh.tag);
        cur = sh.args[0];
    }
    out
}

#[derive(Clone, Debug)]
pub struct ZipCase {
    pub left: EventuallyConstant,
    pub right: EventuallyConstant,
    pub expected: Vec<u32>,
    pub got: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ZipReport {
    pub prefix: usize,
    pub states: usize,
    pub square_failures: usize,
    pub cases: Vec<ZipCase>,
}

impl ZipReport {
    pub fn holds(&self) -> bool {
        self.square_failures == 0 && self.cases.iter().all(|c| c.expected == c.got)
    }
}

/// Solves the zip coalgebra at depth `prefix` and compares each start state's
/// class representative with the direct interleaving.
pub fn zip_demo(sys: &System, pairs: &[(EventuallyConstant, EventuallyConstant)], prefix: usize, budget: &Budget) -> Result<ZipReport> {
    let one = sys.object_by_size(1).ok_or_else(|| Error::Invalid("the one-point object is outside the bound".into()))?;
    let (e, states) = zip_coalgebra(sys, pairs)?;
    let sol = solve(sys, &e, prefix, Some(&[one]), budget)?;
    let at = sol.upper.at(one)?;
    let cases = pairs
        .iter()
        .map(|(s, t)| {
            let x = states.iter().position(|st| st.0 == *s && st.1 == *t).expect("start state");
            let (c, g) = at.rep(sol.classes[one.idx()][x]);
            ZipCase { left: s.clone(), right: t.clone(), expected: interleave(s, t, prefix), got: stream_prefix(sys, c, *g) }
        })
        .collect();
    Ok(ZipReport { prefix, states: states.len(), square_failures: sol.failures.len(), cases })
}

/// Seeded random eventually constant streams with prefixes of length ≤ 3.
pub fn random_pairs(alphabet: u32, count: usize, seed: u64) -> Vec<(EventuallyConstant, EventuallyConstant)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=3);
        let prefix = (0..len).map(|_| rng.gen_range(0..alphabet)).collect();
        EventuallyConstant::new(prefix, rng.gen_range(0..alphabet))
    };
    (0..count).map(|_| (one(&mut rng), one(&mut rng))).collect()
}
