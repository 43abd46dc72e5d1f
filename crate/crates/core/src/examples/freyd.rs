//! The smash-square module on bounded posets and its behaviour map into
//! dyadic expansions.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::budget::Budget;
use crate::builtin::endo::{GLUE, LEFT, RIGHT};
use crate::builtin::{Carrier, Kind, System};
use crate::complexes::{enumerate_complexes, TruncatedComplex};
use crate::error::{Error, Result};
use crate::finalcoalg::build_reduced;
use crate::fincat::{Category, Mor, Obj};
use crate::module::Module;

/// First `n` binary digits of a point's behaviour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beh {
    pub digits: Vec<u8>,
    /// Steps whose value was the glue point; digit 0 was chosen there.
    pub ambiguous: Vec<usize>,
    /// Set when the starting point is the bottom (0) or the top (1).
    pub constant: Option<u8>,
    /// First step at which the walk reached the bottom or the top.
    pub absorbed: Option<usize>,
}

impl Beh {
    pub fn render(&self) -> String {
        let mut s: String = self.digits.iter().map(|d| char::from(b'0' + d)).collect();
        if let Some(k) = self.constant {
            s.push_str(&format!(" constant {k}"));
        }
        for i in &self.ambiguous {
            s.push_str(&format!(" ambiguous@{i}"));
        }
        s
    }
}

fn require_smash(sys: &System) -> Result<()> {
    if sys.kind != Kind::Pos01 {
        return Err(Error::Invalid(format!("{} is not the smash-square system", sys.key())));
    }
    Ok(())
}

/// Digits of `x ∈ c_0`: 0 for the left copy, 1 for the right copy, 0 with a
/// flag for the glue point (continuing from the top of the left copy).
pub fn beh(sys: &System, c: &TruncatedComplex, x: u32) -> Beh {
    let head = sys.carrier(c.obj(0));
    let constant = if x == 0 {
        Some(0)
    } else if x as usize == head.top() {
        Some(1)
    } else {
        None
    };
    let mut out = Beh { digits: Vec::new(), ambiguous: Vec::new(), constant, absorbed: None };
    let mut cur = x;
    for i in 1..=c.depth() {
        let n = sys.carrier(c.obj(i)).n;
        let e = sys.elem_map(c.arrow(i))[cur as usize];
        let sh = sys.endo.decode(n, e);
        let (digit, next) = match sh.tag {
            LEFT => (0, sh.args[0]),
            RIGHT => (1, sh.args[0]),
            _ => {
                out.ambiguous.push(i);
                (0, (n - 1) as u32)
            }
        };
        out.digits.push(digit);
        if out.constant.is_none() && out.absorbed.is_none() && (next == 0 || next as usize == n - 1) {
            out.absorbed = Some(i);
        }
        cur = next;
    }
    out
}

/// Whether two digit strings are prefixes of expansions of the same number:
/// equal, or `d0111…` against `d1000…`.
pub fn dyadic_equal(a: &[u8], b: &[u8]) -> bool {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        None => a.len() == b.len(),
        Some(k) => {
            let (lo, hi) = if a[k] < b[k] { (a, b) } else { (b, a) };
            lo[k + 1..].iter().all(|&d| d == 1) && hi[k + 1..].iter().all(|&d| d == 0)
        }
    }
}

/// The three-element chain complex routing the middle point left or right
/// according to each digit.
pub fn digit_complex(sys: &System, digits: &[u8]) -> Result<TruncatedComplex> {
    require_smash(sys)?;
    let three = sys.object_by_size(3).ok_or_else(|| Error::BoundExceeded("the 3-chain is outside the bound".into()))?;
    let c = sys.carrier(three);
    let (bot, top) = (0u32, c.top() as u32);
    let mid = (0..3u32).find(|&v| v != bot && v != top).expect("3-chain has a middle");
    let mut t = TruncatedComplex::single(three);
    for &d in digits {
        let tag = if d == 0 { LEFT } else { RIGHT };
        let mut map = vec![0u32; 3];
        map[top as usize] = sys.endo.encode(3, RIGHT, &[top]);
        map[mid as usize] = sys.endo.encode(3, tag, &[mid]);
        map[bot as usize] = sys.endo.encode(3, LEFT, &[bot]);
        let e = sys.elem(three, three, &map).ok_or_else(|| Error::Invalid("digit map is not a morphism".into()))?;
        t = t.extend(e);
    }
    Ok(t)
}

fn middle_of_three(sys: &System) -> Result<(Obj, u32)> {
    let three = sys.object_by_size(3).ok_or_else(|| Error::BoundExceeded("the 3-chain is outside the bound".into()))?;
    let c = sys.carrier(three);
    Ok((three, (0..3u32).find(|&v| v != 0 && v as usize != c.top()).expect("middle")))
}

#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    pub depth: usize,
    pub hit: usize,
    pub total: usize,
    pub misses: Vec<String>,
}

impl SurjectivityReport {
    pub fn holds(&self) -> bool {
        self.hit == self.total
    }
}

/// Builds the digit complex for every string of length `n` and reads it back.
pub fn beh_surjective(sys: &System, n: usize) -> Result<SurjectivityReport> {
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let (_, mid) = middle_of_three(sys)?;
    let mut misses = Vec::new();
    let total = 1usize << n;
    for code in 0..total {
        let digits: Vec<u8> = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
        let c = digit_complex(sys, &digits)?;
        let b = beh(sys, &c, mid);
        if b.digits != digits || !b.ambiguous.is_empty() {
            misses.push(format!("{:?} read back as {}", digits, b.render()));
        }
    }
    Ok(SurjectivityReport { depth: n, hit: total - misses.len(), total, misses })
}

/// Outcome of an exhaustive behaviour check.
#[derive(Clone, Debug, Default)]
pub struct BehReport {
    pub depth: usize,
    /// Anchored points `(C, x)` examined.
    pub points: usize,
    /// Zig-zag classes or digit strings compared.
    pub groups: usize,
    /// Points excluded because a glue point made the digits ambiguous.
    pub undetermined: usize,
    pub squares_checked: usize,
    pub failures: Vec<String>,
}

impl BehReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Point {
    complex: TruncatedComplex,
    x: u32,
    class: usize,
    beh: Beh,
}

/// Every anchored point `(C, x)` of depth `n` with its zig-zag class at the
/// 3-chain anchor (a point `x` of `c_0` is the head map `3 → c_0` hitting it).
fn anchored_points(sys: &System, n: usize, budget: &Budget) -> Result<Vec<Point>> {
    require_smash(sys)?;
    let (three, mid) = middle_of_three(sys)?;
    let approx = build_reduced(sys, n, &[three], budget)?;
    let cat = sys.base();
    let mut out = Vec::new();
    for c in enumerate_complexes(sys, n, None, budget)? {
        for &g in cat.hom(c.head(), three) {
            let x = sys.kmap(g)[mid as usize];
            let class = approx
                .class_of(sys, &c, g)
                .ok_or_else(|| Error::Invalid("anchored point without a class".into()))?;
            out.push(Point { beh: beh(sys, &c, x), complex: c.clone(), x, class });
        }
    }
    Ok(out)
}

fn describe(sys: &System, p: &Point) -> String {
    format!("{} at {} : {}", p.complex.render(sys), p.x, p.beh.render())
}

/// Digits agree along every edge of the zig-zag relation at depth `n`.
///
/// Truncated classes at the 3-chain anchor are coarse (the last level is
/// unconstrained, so neighbouring dyadic intervals share endpoints) and
/// prefix dyadic equality is not transitive, so the check runs edge by edge.
/// Every morphism of anchored points factors through the inclusions of
/// generated sub-pairs, which keep the walk of `x` and so its digits, and the
/// unique carrier map between generated sub-pairs. Both kinds of edge are
/// checked: every point against its generated sub-pair (exact equality) and
/// every forced map between generated pairs (dyadic equality).
pub fn beh_well_defined(sys: &System, n: usize, budget: &Budget) -> Result<BehReport> {
    let points = anchored_points(sys, n, budget)?;
    let (three, mid) = middle_of_three(sys)?;
    let mut report = BehReport { depth: n, points: points.len(), ..Default::default() };
    let point_beh = |c: &TruncatedComplex, g: Mor| beh(sys, c, sys.kmap(g)[mid as usize]);
    for p in &points {
        let g = point_head(sys, &p.complex, p.x).ok_or_else(|| Error::Invalid("point without a head map".into()))?;
        let (rc, rg) = sys.reduce_pair(&p.complex, g);
        let rb = point_beh(&rc, rg);
        report.squares_checked += 1;
        if rb != p.beh {
            report.failures.push(format!("{} restricts to {} with {}", describe(sys, p), rc.render(sys), rb.render()));
        }
    }
    let gens = sys.generating_pairs(three, n, budget)?;
    let behs: Vec<Beh> = gens.iter().map(|(c, g)| point_beh(c, *g)).collect();
    let mut classes = std::collections::BTreeSet::new();
    for (p, bp) in gens.iter().zip(&behs) {
        for (q, bq) in gens.iter().zip(&behs) {
            budget.charge(1, "comparing generated pairs")?;
            if sys.forced_map(p, q).is_none() {
                continue;
            }
            report.squares_checked += 1;
            if !dyadic_equal(&bp.digits, &bq.digits) {
                report.failures.push(format!(
                    "{} : {} maps to {} : {}",
                    p.0.render(sys),
                    bp.render(),
                    q.0.render(sys),
                    bq.render()
                ));
            }
        }
    }
    for p in &points {
        classes.insert(p.class);
    }
    report.groups = classes.len();
    Ok(report)
}

/// `f: 5 → 5 ∨ 5` with `t₁ ↦ t₂ᴸ`, `t₂ ↦ glue`, `t₃ ↦ t₂ᴿ`.
pub fn five_f(sys: &System) -> Vec<u32> {
    let e = &sys.endo;
    vec![0, e.encode(5, LEFT, &[2]), e.encode(5, GLUE, &[]), e.encode(5, RIGHT, &[2]), e.encode(5, RIGHT, &[4])]
}

/// `h: a_i → 5` read off from where `m` sends each point.
pub fn five_h(sys: &System, m: &[u32], next: usize) -> Vec<u32> {
    m.iter()
        .map(|&e| {
            if e == 0 {
                0
            } else if e as usize == 2 * next - 2 {
                4
            } else {
                match sys.endo.decode(next, e).tag {
                    LEFT => 1,
                    RIGHT => 3,
                    _ => 2,
                }
            }
        })
        .collect()
}

/// `h': a_{i+1} → 5` sending everything but the bounds to `t₂`.
pub fn five_h_prime(c: &Carrier) -> Vec<u32> {
    (0..c.n).map(|z| if z == 0 { 0 } else if z == c.top() { 4 } else { 2 }).collect()
}

/// Checks `(h'∨h')·m_i = f·h` for every layer of `c`, with `h`, `h'`, `f`
/// bounded-poset maps. Returns the number of squares checked.
pub fn five_squares(sys: &System, c: &TruncatedComplex) -> std::result::Result<usize, String> {
    let five = Carrier::chain(5);
    let five_sq = sys.endo.carrier(&five);
    let f = five_f(sys);
    if !Kind::Pos01.is_hom(&f, &five, &five_sq) {
        return Err("f is not a morphism 5 → 5∨5".into());
    }
    for i in 1..=c.depth() {
        let (a, b) = (sys.carrier(c.obj(i - 1)), sys.carrier(c.obj(i)));
        let m = sys.elem_map(c.arrow(i));
        let h = five_h(sys, m, b.n);
        let hp = five_h_prime(b);
        if !Kind::Pos01.is_hom(&h, a, &five) || !Kind::Pos01.is_hom(&hp, b, &five) {
            return Err(format!("layer {i}: h or h' is not a morphism"));
        }
        let lhs: Vec<u32> = m.iter().map(|&e| sys.endo.map_elem(&hp, 5, e)).collect();
        let rhs: Vec<u32> = h.iter().map(|&t| f[t as usize]).collect();
        if lhs != rhs {
            return Err(format!("layer {i}: (h'∨h')·m = {lhs:?} but f·h = {rhs:?}"));
        }
    }
    Ok(c.depth())
}

/// Points with equal, unambiguous digit strings lie in one zig-zag class, and
/// every complex passes the 5-chain squares.
pub fn beh_separating(sys: &System, n: usize, budget: &Budget) -> Result<BehReport> {
    let points = anchored_points(sys, n, budget)?;
    let mut report = BehReport { depth: n, points: points.len(), ..Default::default() };
    let mut by_digits: BTreeMap<(Vec<u8>, Option<u8>), Vec<&Point>> = BTreeMap::new();
    let mut squared: std::collections::HashSet<&TruncatedComplex> = Default::default();
    for p in &points {
        if squared.insert(&p.complex) {
            match five_squares(sys, &p.complex) {
                Ok(k) => report.squares_checked += k,
                Err(e) => report.failures.push(format!("{}: {e}", p.complex.render(sys))),
            }
        }
        if !p.beh.ambiguous.is_empty() || p.beh.absorbed.is_some() {
            report.undetermined += 1;
            continue;
        }
        by_digits.entry((p.beh.digits.clone(), p.beh.constant)).or_default().push(p);
    }
    report.groups = by_digits.len();
    for ((digits, _), group) in &by_digits {
        let first = group[0];
        for p in &group[1..] {
            if p.class != first.class {
                report.failures.push(format!(
                    "digits {:?}: {} and {} are not connected",
                    digits,
                    describe(sys, first),
                    describe(sys, p)
                ));
            }
        }
    }
    Ok(report)
}

/// Outcome of the exhaustive search for serially commutative squares.
#[derive(Clone, Debug, Default)]
pub struct SerialReport {
    pub bound: usize,
    /// Parallel pairs `u, d: X → Y` that cannot be coequalized.
    pub blocked_pairs: usize,
    /// Of those, pairs with a point sent to 0 by one map and to 1 by the other.
    pub direct_clash: usize,
    pub configurations: u64,
    /// Serially commutative squares over pairs with a direct 0/1 clash.
    pub counterexamples: Vec<String>,
    /// Serially commutative squares over blocked pairs without a direct
    /// clash, where the coequalizer collapses 0 and 1 only transitively.
    pub indirect_squares: usize,
    pub indirect_example: Option<String>,
    /// Square successors `h, l` of blocked pairs that have a coequalizer.
    pub unblocked_successors: usize,
    /// Blocked pairs that start an infinite chain of squares within the bound.
    pub infinite: HashSet<PairKey>,
}

/// A parallel pair `u, d: X → Y` of carrier maps, keyed by carrier sizes.
pub type PairKey = (usize, usize, Vec<u32>, Vec<u32>);

impl SerialReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Whether a parallel pair of complexes whose deepest components have
    /// carrier maps `u, d` can be extended through squares forever. Pairs
    /// with a coequalizer always can; blocked pairs only on an infinite chain.
    pub fn extends(&self, sys: &System, u: Mor, d: Mor) -> bool {
        let c = sys.base();
        let (x, y) = (sys.carrier(c.src(u)), sys.carrier(c.dst(u)));
        let (ku, kd) = (sys.kmap(u), sys.kmap(d));
        !is_blocked(x, ku, kd) || self.infinite.contains(&(y.n, x.n, ku.to_vec(), kd.to_vec()))
    }
}

/// `u, d: X → Y` have no coequalizer among bounded posets.
fn is_blocked(y: &Carrier, u: &[u32], d: &[u32]) -> bool {
    let pairs: Vec<(u32, u32)> = u.iter().zip(d).map(|(&a, &b)| (a, b)).collect();
    Kind::Pos01.quotient(y, &pairs).is_none()
}

/// Searches all `X ⇉ Y`, `s: X → Z∨Z`, `h, l: Z → W`, `r: Y → W∨W` with
/// carriers of at most `bound` points for a serially commutative square
/// `r·u = (h∨h)·s`, `r·d = (l∨l)·s` over a pair `u, d` with no coequalizer.
pub fn no_serial_squares(sys: &System, bound: usize, budget: &Budget) -> Result<SerialReport> {
    require_smash(sys)?;
    let objs: Vec<Carrier> = crate::builtin::carrier::skeleton(Kind::Pos01, bound);
    let mut report = SerialReport { bound, ..Default::default() };
    let mut edges: HashMap<PairKey, HashSet<PairKey>> = HashMap::new();
    let homs = |a: &Carrier, b: &Carrier| Kind::Pos01.homs(a, b);
    for x in &objs {
        for y in &objs {
            let xy = homs(x, y);
            for u in &xy {
                for d in &xy {
                    if !is_blocked(y, u, d) {
                        continue;
                    }
                    report.blocked_pairs += 1;
                    let node: PairKey = (x.n, y.n, u.clone(), d.clone());
                    let succ = edges.entry(node).or_default();
                    let top = y.top() as u32;
                    let clash = u.iter().zip(d).any(|(&a, &b)| (a == top && b == 0) || (a == 0 && b == top));
                    report.direct_clash += usize::from(clash);
                    for z in &objs {
                        let zz = sys.endo.carrier(z);
                        for s in homs(x, &zz) {
                            for w in &objs {
                                let ww = sys.endo.carrier(w);
                                let zw = homs(z, w);
                                budget.charge(1, "searching serial squares")?;
                                for h in &zw {
                                    let hs: Vec<u32> = s.iter().map(|&e| sys.endo.map_elem(h, w.n, e)).collect();
                                    for l in &zw {
                                        report.configurations += 1;
                                        let ls: Vec<u32> = s.iter().map(|&e| sys.endo.map_elem(l, w.n, e)).collect();
                                        if let Some(r) = extend(y, &ww, u, d, &hs, &ls) {
                                            if succ.insert((z.n, w.n, h.clone(), l.clone())) && !is_blocked(w, h, l) {
                                                report.unblocked_successors += 1;
                                            }
                                            let found = format!(
                                                "X={} Y={} Z={} W={} u={u:?} d={d:?} s={s:?} h={h:?} l={l:?} r={r:?}",
                                                x.n, y.n, z.n, w.n
                                            );
                                            if clash {
                                                report.counterexamples.push(found);
                                            } else {
                                                report.indirect_squares += 1;
                                                if report.indirect_example.is_none() {
                                                    report.indirect_example = Some(found);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // strip pairs without successors until only infinite chains remain
    let mut alive: HashSet<PairKey> = edges.keys().cloned().collect();
    loop {
        let dead: Vec<PairKey> = alive.iter().filter(|k| !edges[*k].iter().any(|t| alive.contains(t))).cloned().collect();
        if dead.is_empty() {
            break;
        }
        for k in dead {
            alive.remove(&k);
        }
    }
    report.infinite = alive;
    Ok(report)
}

/// A bounded-poset map `r: Y → V` with `r·u = a` and `r·d = b`, if any.
fn extend(y: &Carrier, v: &Carrier, u: &[u32], d: &[u32], a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let mut fixed: Vec<Option<u32>> = vec![None; y.n];
    for (src, val) in u.iter().zip(a).chain(d.iter().zip(b)) {
        match fixed[*src as usize] {
            Some(w) if w != *val => return None,
            _ => fixed[*src as usize] = Some(*val),
        }
    }
    Kind::Pos01
        .homs(y, v)
        .into_iter()
        .find(|r| r.iter().zip(&fixed).all(|(x, f)| f.is_none_or(|w| w == *x)))
}

/// The head map `c_0 → 3` picking `x`, when `x` is a proper point.
pub fn point_head(sys: &System, c: &TruncatedComplex, x: u32) -> Option<Mor> {
    let (three, mid) = middle_of_three(sys).ok()?;
    let cat = sys.base();
    cat.hom(c.head(), three).iter().copied().find(|&g| sys.kmap(g)[mid as usize] == x)
}
