//! Finite carriers for the three concrete base categories: finite sets, finite
//! linear orders, and finite posets with distinct bottom and top.
//!
//! Every carrier is a finite poset on `0..n`. Sets use the discrete order.
//! Bounded posets keep their bottom at `0` and their top at `n-1`.

use std::collections::HashMap;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Set,
    Lin,
    Pos01,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier {
    pub n: usize,
    le: Vec<bool>,
}

impl Carrier {
    pub fn discrete(n: usize) -> Self {
        Carrier::from_fn(n, |i, j| i == j)
    }

    pub fn chain(n: usize) -> Self {
        Carrier::from_fn(n, |i, j| i <= j)
    }

    pub fn from_fn(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let mut t = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                t[i * n + j] = le(i, j);
            }
        }
        Carrier { n, le: t }
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i * self.n + j]
    }

    pub fn top(&self) -> usize {
        self.n - 1
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.le(i, j) || self.le(j, i)))
    }

    /// The induced suborder on `elems`, listed in the given order.
    pub fn restrict(&self, elems: &[u32]) -> Carrier {
        Carrier::from_fn(elems.len(), |i, j| self.le(elems[i] as usize, elems[j] as usize))
    }

    /// Relabels along a bijection `perm: self → result`.
    pub fn permute(&self, perm: &[u32]) -> Carrier {
        let mut inv = vec![0usize; self.n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p as usize] = i;
        }
        Carrier::from_fn(self.n, |i, j| self.le(inv[i], inv[j]))
    }
}

impl Kind {
    /// Elements every subobject must contain.
    pub fn constants(self, c: &Carrier) -> Vec<u32> {
        match self {
            Kind::Pos01 if c.n > 0 => vec![0, c.top() as u32],
            _ => Vec::new(),
        }
    }

    pub fn is_hom(self, f: &[u32], a: &Carrier, b: &Carrier) -> bool {
        if f.len() != a.n || f.iter().any(|&y| y as usize >= b.n) {
            return false;
        }
        if self == Kind::Pos01 && (a.n < 2 || b.n < 2 || f[0] != 0 || f[a.top()] as usize != b.top()) {
            return false;
        }
        if self == Kind::Set {
            return true;
        }
        for i in 0..a.n {
            for j in 0..a.n {
                if a.le(i, j) && !b.le(f[i] as usize, f[j] as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// All morphisms `a → b`, in lexicographic order of their value lists.
    pub fn homs(self, a: &Carrier, b: &Carrier) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(a.n);
        self.hom_dfs(a, b, &mut cur, &mut out);
        out
    }

    fn hom_dfs(self, a: &Carrier, b: &Carrier, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == a.n {
            out.push(cur.clone());
            return;
        }
        for y in 0..b.n as u32 {
            if self == Kind::Pos01 {
                if i == 0 && y != 0 {
                    continue;
                }
                if i == a.top() && y as usize != b.top() {
                    continue;
                }
            }
            if self != Kind::Set {
                let ok = (0..i).all(|j| {
                    (!a.le(j, i) || b.le(cur[j] as usize, y as usize))
                        && (!a.le(i, j) || b.le(y as usize, cur[j] as usize))
                });
                if !ok {
                    continue;
                }
            }
            cur.push(y);
            self.hom_dfs(a, b, cur, out);
            cur.pop();
        }
    }

    /// Quotient of `c` by the congruence generated by identifying each listed
    /// pair. Returns the quotient carrier and the quotient map, or `None` when a
    /// bounded poset would collapse its bottom and top.
    pub fn quotient(self, c: &Carrier, pairs: &[(u32, u32)]) -> Option<(Carrier, Vec<u32>)> {
        let n = c.n;
        let mut le = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                le[i * n + j] = c.le(i, j);
            }
        }
        for &(x, y) in pairs {
            let (x, y) = (x as usize, y as usize);
            le[x * n + y] = true;
            le[y * n + x] = true;
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
        if self == Kind::Pos01 && n > 0 && le[(n - 1) * n] {
            return None;
        }
        let mut rep_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            if rep_of[i] != usize::MAX {
                continue;
            }
            for j in i..n {
                if le[i * n + j] && le[j * n + i] {
                    rep_of[j] = reps.len();
                }
            }
            reps.push(i);
        }
        let k = reps.len();
        // keep the class of the top last for bounded posets
        let mut order: Vec<usize> = (0..k).collect();
        if self == Kind::Pos01 {
            let t = rep_of[n - 1];
            order.retain(|&x| x != t);
            order.push(t);
        }
        let mut pos = vec![0u32; k];
        for (p, &cls) in order.iter().enumerate() {
            pos[cls] = p as u32;
        }
        let q: Vec<u32> = (0..n).map(|i| pos[rep_of[i]]).collect();
        let carrier = Carrier::from_fn(k, |i, j| le[reps[order[i]] * n + reps[order[j]]]);
        Some((carrier, q))
    }
}

/// Isomorphism-class representatives of objects with at most `bound` elements.
pub fn skeleton(kind: Kind, bound: usize) -> Vec<Carrier> {
    match kind {
        Kind::Set => (0..=bound).map(Carrier::discrete).collect(),
        Kind::Lin => (0..=bound).map(Carrier::chain).collect(),
        Kind::Pos01 => {
            let mut out = Vec::new();
            for n in 2..=bound {
                let mut seen: HashMap<Vec<bool>, Carrier> = HashMap::new();
                for c in bounded_posets(n) {
                    let (code, canon) = canonical_pos01(&c);
                    seen.entry(code).or_insert(canon);
                }
                let mut v: Vec<(Vec<bool>, Carrier)> = seen.into_iter().collect();
                v.sort();
                // chains first within each size
                v.sort_by_key(|(_, c)| !c.is_chain());
                out.extend(v.into_iter().map(|(_, c)| c));
            }
            out
        }
    }
}

/// All bounded posets on `0..n` with bottom `0` and top `n-1`.
fn bounded_posets(n: usize) -> Vec<Carrier> {
    let k = n - 2;
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel = |i: usize, j: usize| -> bool {
            if i == j {
                return true;
            }
            let p = pairs.iter().position(|&q| q == (i, j)).unwrap();
            mask >> p & 1 == 1
        };
        let antisym = (0..k).all(|i| (0..k).all(|j| i == j || !(rel(i, j) && rel(j, i))));
        let trans = (0..k).all(|i| (0..k).all(|j| (0..k).all(|l| !(rel(i, j) && rel(j, l)) || rel(i, l))));
        if !antisym || !trans {
            continue;
        }
        out.push(Carrier::from_fn(n, |i, j| {
            if i == 0 || j == n - 1 {
                true
            } else if i == n - 1 || j == 0 {
                false
            } else {
                rel(i - 1, j - 1)
            }
        }));
    }
    out
}

/// Minimal adjacency encoding over all relabelings fixing bottom and top.
pub fn canonical_pos01(c: &Carrier) -> (Vec<bool>, Carrier) {
    let n = c.n;
    let mut best: Option<(Vec<bool>, Carrier)> = None;
    for perm in middle_perms(n) {
        let p = c.permute(&perm);
        let code: Vec<bool> = (0..n * n).map(|i| p.le(i / n, i % n)).collect();
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, p));
        }
    }
    best.expect("at least the identity relabeling")
}

/// Bijections of `0..n` fixing `0` and `n-1`.
pub fn middle_perms(n: usize) -> Vec<Vec<u32>> {
    let mids: Vec<u32> = (1..n.saturating_sub(1) as u32).collect();
    let mut out = Vec::new();
    permutations(&mids, &mut Vec::new(), &mut vec![false; mids.len()], &mut out);
    out.into_iter()
        .map(|p| {
            let mut v = vec![0u32];
            v.extend(p);
            if n > 1 {
                v.push(n as u32 - 1);
            }
            v.truncate(n);
            v
        })
        .collect()
}

fn permutations(items: &[u32], cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// An isomorphism from `c` onto a skeleton member, as `(index, map)`.
pub fn find_iso(kind: Kind, skel: &[Carrier], c: &Carrier) -> Option<(usize, Vec<u32>)> {
    match kind {
        Kind::Set | Kind::Lin => {
            let i = skel.iter().position(|s| s.n == c.n)?;
            Some((i, (0..c.n as u32).collect()))
        }
        Kind::Pos01 => {
            for perm in middle_perms(c.n) {
                let p = c.permute(&perm);
                if let Some(i) = skel.iter().position(|s| *s == p) {
                    return Some((i, perm));
                }
            }
            None
        }
    }
}
