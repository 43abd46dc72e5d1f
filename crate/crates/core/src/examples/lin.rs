//! The (jointly epi, extremal mono) factorization on finite linear orders:
//! a cocone factors through the union of its leg images with the induced order.

use crate::budget::Budget;
use crate::builtin::endo::Endo;
use crate::builtin::{Carrier, KChain, KCone, Kind, System};
use crate::complexes::{enumerate_complexes, enumerate_morphisms, TruncatedComplex};
use crate::error::{Error, Result};
use crate::solvability::{kcone_of, ConePoint, FactorizationOracle};

/// Factorization oracle for finite linear orders.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinFactorization;

/// A cocone `legs_j: S_j → V` split as jointly epi legs onto the image and
/// the embedding of the image into `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub image: Carrier,
    pub epi_legs: Vec<Vec<u32>>,
    pub mono: Vec<u32>,
}

pub fn lin_factorize(vertex: &Carrier, legs: &[Vec<u32>]) -> Factorization {
    let mut hit = vec![false; vertex.n];
    for l in legs {
        for &y in l {
            hit[y as usize] = true;
        }
    }
    let mut mono: Vec<u32> = (0..vertex.n as u32).filter(|&y| hit[y as usize]).collect();
    mono.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if vertex.le(a as usize, b as usize) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let mut pos = vec![u32::MAX; vertex.n];
    for (i, &y) in mono.iter().enumerate() {
        pos[y as usize] = i as u32;
    }
    let epi_legs = legs.iter().map(|l| l.iter().map(|&y| pos[y as usize]).collect()).collect();
    Factorization { image: Carrier::chain(mono.len()), epi_legs, mono }
}

pub fn is_jointly_epi(vertex: &Carrier, legs: &[Vec<u32>]) -> bool {
    let mut hit = vec![false; vertex.n];
    legs.iter().flatten().for_each(|&y| hit[y as usize] = true);
    hit.iter().all(|&h| h)
}

fn is_embedding(f: &[u32], a: &Carrier, b: &Carrier) -> bool {
    (0..a.n).all(|i| (0..a.n).all(|j| a.le(i, j) == b.le(f[i] as usize, f[j] as usize)))
        && (0..a.n).all(|i| (0..i).all(|j| f[i] != f[j]))
}

impl FactorizationOracle for LinFactorization {
    fn jointly_epi_cocones(&self, sources: &[&Carrier]) -> Vec<(Carrier, Vec<Vec<u32>>)> {
        let total: usize = sources.iter().map(|s| s.n).sum();
        let mut out = Vec::new();
        for k in 0..=total {
            let v = Carrier::chain(k);
            let per: Vec<Vec<Vec<u32>>> = sources.iter().map(|s| Kind::Lin.homs(s, &v)).collect();
            let mut legs = Vec::new();
            product(&per, &mut legs, &mut |legs| {
                if is_jointly_epi(&v, legs) {
                    out.push((v.clone(), legs.to_vec()));
                }
            });
        }
        out
    }

    fn is_extremal_mono(&self, f: &[u32], a: &Carrier, b: &Carrier) -> bool {
        Kind::Lin.is_hom(f, a, b) && is_embedding(f, a, b)
    }
}

fn product(per: &[Vec<Vec<u32>>], cur: &mut Vec<Vec<u32>>, visit: &mut dyn FnMut(&[Vec<u32>])) {
    if cur.len() == per.len() {
        visit(cur);
        return;
    }
    for f in &per[cur.len()] {
        cur.push(f.clone());
        product(per, cur, visit);
        cur.pop();
    }
}

/// Counts of exhaustively checked instances of each law, with failures.
#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub factorizations: usize,
    pub compositions: usize,
    pub diagonals: usize,
    pub preserved: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn compose(g: &[u32], f: &[u32]) -> Vec<u32> {
    f.iter().map(|&x| g[x as usize]).collect()
}

/// Factorization, composition of extremal monos and unique diagonals on
/// chains of at most `size` points; extremal monos preserved by both
/// functor selectors up to height `height`.
pub fn check_lin_laws(size: usize, height: u32) -> LawReport {
    let oracle = LinFactorization;
    let chains: Vec<Carrier> = (0..=size).map(Carrier::chain).collect();
    let homs = |a: &Carrier, b: &Carrier| Kind::Lin.homs(a, b);
    let mut r = LawReport::default();
    // factorizations of one- and two-legged cocones
    for v in &chains {
        for a in &chains {
            for f in homs(a, v) {
                factor_case(&oracle, v, &[a], &[f], &mut r);
            }
            for b in &chains {
                for f in homs(a, v) {
                    for g in homs(b, v) {
                        factor_case(&oracle, v, &[a, b], &[f.clone(), g], &mut r);
                    }
                }
            }
        }
    }
    // extremal monos compose
    for a in &chains {
        for b in &chains {
            for c in &chains {
                for f in homs(a, b).into_iter().filter(|f| oracle.is_extremal_mono(f, a, b)) {
                    for g in homs(b, c).into_iter().filter(|g| oracle.is_extremal_mono(g, b, c)) {
                        r.compositions += 1;
                        if !oracle.is_extremal_mono(&compose(&g, &f), a, c) {
                            r.failures.push(format!("composite of extremal monos {f:?}, {g:?} is not one"));
                        }
                    }
                }
            }
        }
    }
    // unique diagonals: m·u = v·e with e epi and m an extremal mono
    for a in &chains {
        for b in &chains {
            for e in homs(a, b).into_iter().filter(|e| is_jointly_epi(b, std::slice::from_ref(e))) {
                for c in &chains {
                    for d in &chains {
                        for m in homs(c, d).into_iter().filter(|m| oracle.is_extremal_mono(m, c, d)) {
                            for u in homs(a, c) {
                                let mu = compose(&m, &u);
                                for v in homs(b, d).into_iter().filter(|v| compose(v, &e) == mu) {
                                    r.diagonals += 1;
                                    let diag: Vec<Vec<u32>> = homs(b, c)
                                        .into_iter()
                                        .filter(|t| compose(t, &e) == u && compose(&m, t) == v)
                                        .collect();
                                    if diag.len() != 1 {
                                        r.failures.push(format!(
                                            "square e={e:?} m={m:?} u={u:?} v={v:?} has {} diagonals",
                                            diag.len()
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // both functors preserve extremal monos
    for top in [false, true] {
        let endo = Endo::LinOmega { height, top };
        for a in chains.iter().take(4.min(chains.len())) {
            for b in chains.iter().take(4.min(chains.len())) {
                for f in homs(a, b).into_iter().filter(|f| oracle.is_extremal_mono(f, a, b)) {
                    r.preserved += 1;
                    let (pa, pb) = (endo.carrier(a), endo.carrier(b));
                    let pf = endo.map(&f, b.n);
                    if !oracle.is_extremal_mono(&pf, &pa, &pb) {
                        r.failures.push(format!("Φ (top={top}, height={height}) breaks the embedding {f:?}"));
                    }
                }
            }
        }
    }
    r
}

fn factor_case(oracle: &LinFactorization, v: &Carrier, sources: &[&Carrier], legs: &[Vec<u32>], r: &mut LawReport) {
    r.factorizations += 1;
    let fz = lin_factorize(v, legs);
    let ok = is_jointly_epi(&fz.image, &fz.epi_legs)
        && oracle.is_extremal_mono(&fz.mono, &fz.image, v)
        && fz.epi_legs.iter().zip(sources).all(|(l, s)| Kind::Lin.is_hom(l, s, &fz.image))
        && fz.epi_legs.iter().zip(legs).all(|(e, l)| compose(&fz.mono, e) == *l);
    if !ok {
        r.failures.push(format!("cocone {legs:?} into {} points does not factor", v.n));
    }
}

/// Outcome of checking that a factorization family is final among all cones
/// over the same diagram within the bound.
#[derive(Clone, Debug)]
pub struct FinalityReport {
    pub family: usize,
    pub cones: usize,
    pub unfactored: Vec<String>,
}

impl FinalityReport {
    pub fn holds(&self) -> bool {
        self.unfactored.is_empty()
    }
}

/// Every cone over `sources` (a discrete diagram of complexes) whose vertex
/// is a complex within the bound factors through a member of `family`.
pub fn check_final_family(
    sys: &System,
    sources: &[TruncatedComplex],
    family: &[KCone],
    budget: &Budget,
) -> Result<FinalityReport> {
    let n = sources.first().map(|s| s.depth()).ok_or_else(|| Error::Invalid("empty diagram".into()))?;
    let mut cones = 0;
    let mut unfactored = Vec::new();
    for v in enumerate_complexes(sys, n, None, budget)? {
        let per: Vec<Vec<_>> = sources.iter().map(|s| enumerate_morphisms(sys, &v, s)).collect();
        let mut stack = Vec::new();
        let mut visit = |legs: &[crate::complexes::ComplexMorphism]| {
            cones += 1;
            let k = kcone_of(sys, &ConePoint { vertex: v.clone(), legs: legs.to_vec() });
            if !family.iter().any(|q| sys.factor_through(q, &k).is_some()) && unfactored.len() < 10 {
                unfactored.push(format!("{} does not factor", v.render(sys)));
            }
        };
        morphism_product(&per, &mut stack, &mut visit);
        budget.charge(1, "enumerating cones")?;
    }
    Ok(FinalityReport { family: family.len(), cones, unfactored })
}

fn morphism_product<T: Clone>(per: &[Vec<T>], cur: &mut Vec<T>, visit: &mut dyn FnMut(&[T])) {
    if cur.len() == per.len() {
        visit(cur);
        return;
    }
    for f in &per[cur.len()] {
        cur.push(f.clone());
        morphism_product(per, cur, visit);
        cur.pop();
    }
}

/// Carrier chains of the given complexes.
pub fn kchains(sys: &System, cs: &[TruncatedComplex]) -> Vec<KChain> {
    cs.iter().map(|c| sys.kchain(c)).collect()
}
