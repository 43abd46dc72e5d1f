use crate::error::{Error, Result};
use crate::fincat::{FinPreorder, MonotoneMap};

/// Preorders `P_0, …, P_N` with maps `maps[n]: P_{n+1} → P_n`.
#[derive(Clone, Debug)]
pub struct PreorderChain {
    pub levels: Vec<FinPreorder>,
    pub maps: Vec<MonotoneMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoenigFailure {
    EmptyLevel(usize),
    NotMonotone { n: usize, p: usize, q: usize },
    /// The image of `↑x ⊆ P_{n+1}` misses `violating ∈ P_n` although it lies above the image.
    NotUpClosed { n: usize, x: usize, violating: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoenigVerdict {
    pub failure: Option<KoenigFailure>,
    pub levels_checked: usize,
}

impl KoenigVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl PreorderChain {
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.maps.len() + 1 != self.levels.len() && !(self.levels.is_empty() && self.maps.is_empty()) {
            return Err(Error::Invalid("a chain of N+1 preorders needs N maps".into()));
        }
        for (n, f) in self.maps.iter().enumerate() {
            if f.map.len() != self.levels[n + 1].len() || f.map.iter().any(|&y| y >= self.levels[n].len()) {
                return Err(Error::Invalid(format!("map {} does not go from level {} to level {}", n, n + 1, n)));
            }
        }
        Ok(())
    }
}

/// Condition (1): every level is nonempty. Condition (2): the image of every
/// principal upset `↑x` is upward closed. Every upset is a union of principal
/// upsets and images preserve unions, so this covers all upsets.
pub fn check_koenig_conditions(ch: &PreorderChain) -> KoenigVerdict {
    let mut out = KoenigVerdict { failure: None, levels_checked: 0 };
    for (n, p) in ch.levels.iter().enumerate() {
        if p.is_empty() {
            out.failure = Some(KoenigFailure::EmptyLevel(n));
            return out;
        }
    }
    for (n, f) in ch.maps.iter().enumerate() {
        let (upper, lower) = (&ch.levels[n + 1], &ch.levels[n]);
        if let Some((p, q)) = f.is_monotone(upper, lower) {
            out.failure = Some(KoenigFailure::NotMonotone { n, p, q });
            return out;
        }
        for x in 0..upper.len() {
            let mut image = vec![false; lower.len()];
            for y in 0..upper.len() {
                if upper.le(x, y) {
                    image[f.map[y]] = true;
                }
            }
            for s in 0..lower.len() {
                if !image[s] {
                    continue;
                }
                if let Some(t) = (0..lower.len()).find(|&t| lower.le(s, t) && !image[t]) {
                    out.failure = Some(KoenigFailure::NotUpClosed { n, x, violating: t });
                    return out;
                }
            }
        }
        out.levels_checked += 1;
    }
    out
}

/// Condition (2) by brute force over every upset of every level.
pub fn koenig_powerset_oracle(ch: &PreorderChain) -> bool {
    if ch.levels.iter().any(|p| p.is_empty()) {
        return false;
    }
    for (n, f) in ch.maps.iter().enumerate() {
        let (upper, lower) = (&ch.levels[n + 1], &ch.levels[n]);
        if f.is_monotone(upper, lower).is_some() {
            return false;
        }
        let k = upper.len();
        assert!(k <= 20, "powerset oracle is for small preorders");
        for mask in 0u32..(1 << k) {
            let set: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            if !upper.is_upset(&set) {
                continue;
            }
            let mut image = vec![false; lower.len()];
            for (y, &inside) in set.iter().enumerate() {
                if inside {
                    image[f.map[y]] = true;
                }
            }
            if !lower.is_upset(&image) {
                return false;
            }
        }
    }
    true
}

/// A compatible sequence `x_0, …, x_N` from the least `x_N`, pushed down the maps.
pub fn thread(ch: &PreorderChain, depth: usize) -> Result<Vec<usize>> {
    if depth >= ch.levels.len() {
        return Err(Error::DepthExceeded { requested: depth, depth: ch.depth() });
    }
    for n in 0..=depth {
        if ch.levels[n].is_empty() {
            return Err(Error::EmptyLevel(n));
        }
    }
    let mut out = vec![0usize; depth + 1];
    for n in (0..depth).rev() {
        out[n] = ch.maps[n].map[out[n + 1]];
    }
    Ok(out)
}
