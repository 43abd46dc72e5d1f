use std::collections::HashMap;

use crate::budget::Budget;
use crate::builtin::kchain::compose_kmaps;
use crate::builtin::{Carrier, KChain, KCone, KMap, System};
use crate::complexes::{enumerate_complexes, enumerate_morphisms, is_complex_morphism, ComplexMorphism, LazyComplex, TruncatedComplex};
use crate::error::{Error, Result};
use crate::fincat::{final_subset, FinPreorder, MonotoneMap};
use crate::module::Module;

use super::koenig::{thread, PreorderChain};

/// A finite diagram of complexes: nodes plus arrows `(from, to, morphism)`
/// whose components cover every level used.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub nodes: Vec<LazyComplex>,
    pub arrows: Vec<(usize, usize, ComplexMorphism)>,
}

impl Diagram {
    pub fn discrete(nodes: Vec<LazyComplex>) -> Self {
        Diagram { nodes, arrows: Vec::new() }
    }

    pub fn at(&self, n: usize) -> (Vec<TruncatedComplex>, Vec<(usize, usize, ComplexMorphism)>) {
        let nodes = self.nodes.iter().map(|c| c.at(n)).collect();
        let arrows = self.arrows.iter().map(|(i, j, f)| (*i, *j, f.truncate(n))).collect();
        (nodes, arrows)
    }
}

/// A cone over `pr_n ∘ D`: a vertex and one leg per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConePoint {
    pub vertex: TruncatedComplex,
    pub legs: Vec<ComplexMorphism>,
}

impl ConePoint {
    pub fn truncate(&self, k: usize) -> ConePoint {
        ConePoint {
            vertex: self.vertex.truncate(k).expect("k within depth"),
            legs: self.legs.iter().map(|l| l.truncate(k)).collect(),
        }
    }
}

/// Points of `P^D_n` with `c ⊑ c'` iff `c` factors through `c'`.
#[derive(Clone, Debug)]
pub struct ConePreorder {
    pub level: usize,
    pub points: Vec<ConePoint>,
    pub nodes: Vec<TruncatedComplex>,
    index: HashMap<ConePoint, usize>,
}

impl ConePreorder {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, p: &ConePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Morphisms `h: vertex(p) → vertex(q)` with `leg_q ∘ h = leg_p` for every node.
    pub fn factorizations(&self, m: &dyn Module, p: usize, q: usize) -> Vec<ComplexMorphism> {
        let c = m.base();
        let (p, q) = (&self.points[p], &self.points[q]);
        enumerate_morphisms(m, &p.vertex, &q.vertex)
            .into_iter()
            .filter(|h| q.legs.iter().zip(&p.legs).all(|(lq, lp)| ComplexMorphism::compose(c, lq, h) == *lp))
            .collect()
    }

    pub fn le(&self, m: &dyn Module, p: usize, q: usize) -> bool {
        let c = m.base();
        let (pp, qq) = (&self.points[p], &self.points[q]);
        enumerate_morphisms(m, &pp.vertex, &qq.vertex)
            .iter()
            .any(|h| qq.legs.iter().zip(&pp.legs).all(|(lq, lp)| ComplexMorphism::compose(c, lq, h) == *lp))
    }

    /// The full relation, or `BoundExceeded` past `limit` points.
    pub fn materialize(&self, m: &dyn Module, limit: usize) -> Result<FinPreorder> {
        if self.len() > limit {
            return Err(Error::BoundExceeded(format!(
                "materializing a cone preorder with {} points (limit {limit})",
                self.len()
            )));
        }
        let names = (0..self.len()).map(|i| format!("k{i}")).collect();
        let n = self.len();
        let mut le = vec![false; n * n];
        for p in 0..n {
            for q in 0..n {
                le[p * n + q] = p == q || self.le(m, p, q);
            }
        }
        FinPreorder::from_table(names, le)
    }
}

/// All cones over `pr_n ∘ D` with vertices among the depth-`n` complexes.
pub fn build_cone_preorder(m: &dyn Module, d: &Diagram, n: usize, budget: &Budget) -> Result<ConePreorder> {
    let c = m.base();
    let (nodes, arrows) = d.at(n);
    let vertices = enumerate_complexes(m, n, None, budget)?;
    let mut points = Vec::new();
    for v in vertices {
        let per_node: Vec<Vec<ComplexMorphism>> = nodes.iter().map(|x| enumerate_morphisms(m, &v, x)).collect();
        let total: u64 = per_node.iter().map(|l| l.len() as u64).product();
        budget.charge(total + 1, "enumerating cones")?;
        let mut choice = vec![0usize; nodes.len()];
        if per_node.iter().any(|l| l.is_empty()) {
            continue;
        }
        loop {
            let legs: Vec<ComplexMorphism> = choice.iter().enumerate().map(|(j, &k)| per_node[j][k].clone()).collect();
            let commutes = arrows
                .iter()
                .all(|(i, j, f)| ComplexMorphism::compose(c, f, &legs[*i]) == legs[*j]);
            if commutes {
                points.push(ConePoint { vertex: v.clone(), legs });
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    break;
                }
                choice[k] += 1;
                if choice[k] < per_node[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok(ConePreorder { level: n, points, nodes, index })
}

/// Restriction `P_{n+1} → P_n`: drop the deepest layer of vertex and legs.
pub fn restriction(upper: &ConePreorder, lower: &ConePreorder) -> Result<MonotoneMap> {
    let map = upper
        .points
        .iter()
        .map(|p| {
            lower
                .position(&p.truncate(lower.level))
                .ok_or_else(|| Error::Invalid("restricted cone missing from the lower level".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotoneMap { map })
}

#[derive(Clone, Debug)]
pub struct CompactVerdict {
    /// `(level, number of points, final subset if materialized)`.
    pub levels: Vec<(usize, usize, Option<Vec<usize>>)>,
    pub empty_level: Option<usize>,
}

impl CompactVerdict {
    pub fn holds(&self) -> bool {
        self.empty_level.is_none()
    }
}

/// Nonemptiness of every `P^D_n` up to `up_to`, with a final subset where the
/// preorder is small enough to materialize. Finiteness of that subset is
/// automatic for finite preorders; nonemptiness is the substantive check.
pub fn check_compact(m: &dyn Module, d: &Diagram, up_to: usize, materialize_limit: usize, budget: &Budget) -> Result<CompactVerdict> {
    let mut out = CompactVerdict { levels: Vec::new(), empty_level: None };
    for n in 0..=up_to {
        let p = build_cone_preorder(m, d, n, budget)?;
        if p.is_empty() {
            out.levels.push((n, 0, None));
            out.empty_level = Some(n);
            return Ok(out);
        }
        let fin = match p.materialize(m, materialize_limit) {
            Ok(pre) => Some(final_subset(&pre)?),
            Err(Error::BoundExceeded(_)) => None,
            Err(e) => return Err(e),
        };
        out.levels.push((n, p.len(), fin));
    }
    Ok(out)
}

/// The chain `P_0 ← P_1 ← … ← P_N` of cone preorders, with relations
/// materialized when every level has at most `materialize_limit` points.
pub fn cone_chain(m: &dyn Module, d: &Diagram, depth: usize, materialize_limit: usize, budget: &Budget) -> Result<(Vec<ConePreorder>, PreorderChain)> {
    let levels: Vec<ConePreorder> = (0..=depth).map(|n| build_cone_preorder(m, d, n, budget)).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for n in 0..depth {
        maps.push(restriction(&levels[n + 1], &levels[n])?);
    }
    let small = levels.iter().all(|p| p.len() <= materialize_limit);
    let pres: Vec<FinPreorder> = if small {
        levels.iter().map(|p| p.materialize(m, materialize_limit)).collect::<Result<_>>()?
    } else {
        // only the point sets matter for threading
        levels.iter().map(|p| FinPreorder::anonymous(p.len(), |i, j| i == j)).collect()
    };
    Ok((levels, PreorderChain { levels: pres, maps }))
}

#[derive(Clone, Debug)]
pub struct StrongCone {
    pub cone: ConePoint,
    /// The thread `x_0, …, x_N` through the cone preorders.
    pub thread: Vec<usize>,
}

/// A cone over `pr_N ∘ D` assembled from a thread through the cone preorders:
/// its `i`-th layer comes from `x_i`. Since restriction is truncation, that
/// diagonal complex is the vertex of `x_N`; it is re-verified square by square.
pub fn weak_to_strong(m: &dyn Module, d: &Diagram, depth: usize, budget: &Budget) -> Result<StrongCone> {
    let (levels, chain) = cone_chain(m, d, depth, 0, budget)?;
    let th = thread(&chain, depth)?;
    let objs: Vec<_> = (0..=depth).map(|i| levels[i].points[th[i]].vertex.obj(i)).collect();
    let maps: Vec<_> = (1..=depth).map(|i| levels[i].points[th[i]].vertex.arrow(i)).collect();
    let vertex = TruncatedComplex::new(objs, maps)?;
    let top = &levels[depth].points[th[depth]];
    let legs: Vec<ComplexMorphism> = (0..d.nodes.len())
        .map(|j| ComplexMorphism { comps: (0..=depth).map(|i| levels[i].points[th[i]].legs[j].comps[i]).collect() })
        .collect();
    let cone = ConePoint { vertex, legs };
    let (nodes, arrows) = d.at(depth);
    let c = m.base();
    let ok = cone.legs.iter().zip(&nodes).all(|(l, x)| is_complex_morphism(m, &cone.vertex, x, l))
        && arrows.iter().all(|(i, j, f)| ComplexMorphism::compose(c, f, &cone.legs[*i]) == cone.legs[*j])
        && cone == *top;
    if !ok {
        return Err(Error::Invalid("diagonal complex is not a cone".into()));
    }
    Ok(StrongCone { cone, thread: th })
}

/// Carrier form of a cone over builtin complexes.
pub fn kcone_of(sys: &System, p: &ConePoint) -> KCone {
    KCone { vertex: sys.kchain(&p.vertex), legs: p.legs.iter().map(|l| sys.kmorphism(l)).collect() }
}

/// A `(jointly epi, extremal mono)` factorization system on the carriers of a base.
pub trait FactorizationOracle {
    /// Every jointly epi cocone out of `sources`, up to isomorphism of the vertex.
    fn jointly_epi_cocones(&self, sources: &[&Carrier]) -> Vec<(Carrier, Vec<Vec<u32>>)>;
    fn is_extremal_mono(&self, f: &[u32], a: &Carrier, b: &Carrier) -> bool;
}

/// The finite family of cones from the factorization argument: jointly epi
/// cocones level by level from the deepest, each with its uniquely determined
/// arrow. Returns the family and checks it is final among `cones` by
/// factoring every cone through a member.
pub fn factorization_final_subset(
    sys: &System,
    sources: &[KChain],
    oracle: Option<&dyn FactorizationOracle>,
) -> Result<Vec<KCone>> {
    let oracle = oracle.ok_or_else(|| Error::OracleUnavailable(sys.key().to_string()))?;
    let n = sources.first().map(|s| s.depth()).unwrap_or(0);
    let level = |i: usize| -> Vec<&Carrier> { sources.iter().map(|s| &s.objs[i]).collect() };
    // partial cones hold levels i..=n, stored deepest last
    let mut partial: Vec<(Vec<Carrier>, Vec<Vec<u32>>, Vec<KMap>)> = oracle
        .jointly_epi_cocones(&level(n))
        .into_iter()
        .map(|(v, legs)| (vec![v], Vec::new(), legs.into_iter().map(|l| vec![l]).collect()))
        .collect();
    for i in (1..=n).rev() {
        let mut next = Vec::new();
        for (objs, maps, legs) in &partial {
            let vi = &objs[0];
            for (v, new_legs) in oracle.jointly_epi_cocones(&level(i - 1)) {
                let mut arrow = vec![u32::MAX; v.n];
                let mut ok = true;
                for (j, s) in sources.iter().enumerate() {
                    for (p, &e) in s.maps[i - 1].iter().enumerate() {
                        let img = sys.endo.map_elem(&legs[j][0], vi.n, e);
                        let slot = &mut arrow[new_legs[j][p] as usize];
                        if *slot != u32::MAX && *slot != img {
                            ok = false;
                        }
                        *slot = img;
                    }
                }
                if !ok || !sys.kind.is_hom(&arrow, &v, &sys.endo.carrier(vi)) {
                    continue;
                }
                let mut objs2 = vec![v];
                objs2.extend(objs.iter().cloned());
                let mut maps2 = vec![arrow];
                maps2.extend(maps.iter().cloned());
                let legs2: Vec<KMap> = legs
                    .iter()
                    .zip(new_legs)
                    .map(|(l, nl)| {
                        let mut v = vec![nl];
                        v.extend(l.iter().cloned());
                        v
                    })
                    .collect();
                next.push((objs2, maps2, legs2));
            }
        }
        partial = next;
    }
    let refs: Vec<&KChain> = sources.iter().collect();
    let family: Vec<KCone> = partial
        .into_iter()
        .map(|(objs, maps, legs)| KCone { vertex: KChain { objs, maps }, legs })
        .collect();
    for k in &family {
        if !sys.is_kcone(&refs, k) {
            return Err(Error::Invalid("factorization family member is not a cone".into()));
        }
    }
    Ok(family)
}

/// Whether `cone` factors through some member of `family`.
pub fn factors_through_family(sys: &System, family: &[KCone], cone: &KCone) -> Option<usize> {
    family.iter().position(|k| sys.factor_through(k, cone).is_some())
}

/// Relabels carrier legs of `cone` into the cone's skeletal form, if within bound.
pub fn kcone_to_point(sys: &System, nodes: &[TruncatedComplex], cone: &KCone) -> Option<ConePoint> {
    let (vertex, isos) = sys.complex_of(&cone.vertex)?;
    let legs = nodes
        .iter()
        .zip(&cone.legs)
        .map(|(x, l)| sys.morphism_of(&vertex, x, &compose_kmaps(&isos, l)))
        .collect::<Option<Vec<_>>>()?;
    Some(ConePoint { vertex, legs })
}
