//! Subcommands over system files.

use selfsim::builtin::{Kind, System};
use selfsim::complexes::{count_complexes, enumerate_complexes, LazyComplex};
use selfsim::examples::freyd;
use selfsim::finalcoalg::{refinement_chain, solve as solve_coalgebra, structure_map};
use selfsim::fincat::{is_cofiltered, validate_category, Category, Obj};
use selfsim::format::ModuleDecl;
use selfsim::module::{elems, flat_check, functor_flat_check, validate_module, validate_pointing, Module};
use selfsim::solvability::{check_compact, check_koenig_conditions, check_strong_with, check_weak, thread, Diagram, KoenigFailure, Options};
use selfsim::{Budget, Error, Result};

use crate::load::{active_module, load_chain, load_system};
use crate::report::Report;

fn scope(m: &dyn Module) -> String {
    m.bound().map_or_else(String::new, |b| format!(" within bound {b}"))
}

fn object(m: &dyn Module, name: &str) -> Result<Obj> {
    let c = m.base();
    c.objects().find(|&a| c.obj_name(a) == name).ok_or_else(|| Error::Unknown(name.to_string()))
}

fn objects(m: &dyn Module, names: &[String]) -> Result<Vec<Obj>> {
    if names.is_empty() {
        return Ok(m.base().objects().collect());
    }
    names.iter().map(|n| object(m, n)).collect()
}

/// Table modules are validated before any analysis; builtins are valid by construction.
fn check_valid(r: &mut Report, d: &ModuleDecl) -> bool {
    if d.system.is_some() {
        return true;
    }
    let v = validate_module(d.module.as_ref());
    for x in &v {
        r.invalid(format!("module {}: {x}", d.name));
    }
    v.is_empty()
}

pub fn validate(r: &mut Report, file: &str) -> Result<()> {
    r.param("file", file);
    let f = load_system(file)?;
    for c in &f.categories {
        let v = validate_category(c);
        if v.is_empty() {
            r.verdict(true, format!("category {} is valid", c.name()));
            let cof = is_cofiltered(c.as_ref());
            r.info(format!("category {} cofiltered: {}", c.name(), cof.describe(c.as_ref())));
        }
        for x in &v {
            r.invalid(format!("category {}: {x}", c.name()));
        }
    }
    for d in &f.modules {
        let v = validate_module(d.module.as_ref());
        if v.is_empty() {
            r.verdict(true, format!("module {} is valid{}", d.name, scope(d.module.as_ref())));
        }
        for x in &v {
            r.invalid(format!("module {}: {x}", d.name));
        }
        if let Some(p) = &d.pointing {
            let v = validate_pointing(d.module.as_ref(), p);
            if v.is_empty() {
                r.verdict(true, format!("pointing of {} is valid", d.name));
            }
            for x in &v {
                r.invalid(format!("pointing of {}: {x}", d.name));
            }
        }
    }
    for x in &f.functors {
        let v = x.validate();
        if v.is_empty() {
            r.verdict(true, format!("functor {} is valid", x.name));
        }
        for e in &v {
            r.invalid(format!("functor {}: {e}", x.name));
        }
    }
    for e in &f.coalgebras {
        let m = f.module(&e.module).expect("resolved while parsing");
        let v = e.coalgebra.validate(m.module.as_ref());
        if v.is_empty() {
            r.verdict(true, format!("coalgebra {} is valid", e.coalgebra.name));
        }
        for x in &v {
            r.invalid(format!("coalgebra {}: {x}", e.coalgebra.name));
        }
    }
    r.count(f.categories.len() + f.modules.len() + f.functors.len() + f.coalgebras.len(), "declarations");
    Ok(())
}

pub fn flat(r: &mut Report, file: &str, module: Option<&str>) -> Result<()> {
    r.param("file", file);
    let f = load_system(file)?;
    let d = active_module(&f, module)?;
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let c = m.base();
    let mut failures = 0;
    let mut sampled = false;
    for a in c.objects() {
        let v = flat_check(m, a);
        sampled |= v.sampled;
        if !v.holds() {
            failures += 1;
            r.witness(format!("at {}: {}", c.obj_name(a), v.describe(m)));
        }
        if v.beyond_bound > 0 {
            r.info(format!("at {}: {} witnesses built beyond the bound", c.obj_name(a), v.beyond_bound));
        }
    }
    if sampled {
        r.warn("some pairs were drawn from a seeded sample; not exhaustive");
    }
    r.count(c.num_objects(), "objects checked");
    r.verdict(failures == 0, format!("module {} is flat at every object{}", d.name, scope(m)));
    for x in &f.functors {
        let (ok, why) = functor_flat_check(x);
        r.verdict(ok, format!("functor {} is flat: {why}", x.name));
    }
    Ok(())
}

pub fn complexes(
    r: &mut Report,
    file: &str,
    module: Option<&str>,
    depth: usize,
    head: Option<&str>,
    list: usize,
    budget: &Budget,
) -> Result<()> {
    r.param("file", file);
    r.param("depth", depth);
    let f = load_system(file)?;
    let d = active_module(&f, module)?;
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let head = head.map(|h| object(m, h)).transpose()?;
    let total = count_complexes(m, depth, head);
    r.count(total, format!("complexes of depth {depth}{}", scope(m)));
    if list > 0 && total > budget.limit() as u128 {
        r.info(format!("listing skipped: {total} complexes exceed the enumeration cap"));
    } else if list > 0 {
        let cs = enumerate_complexes(m, depth, head, budget)?;
        for c in cs.iter().take(list) {
            r.item(c.render(m));
        }
    }
    Ok(())
}

pub struct SolvableOpts {
    pub strong: bool,
    pub depth: usize,
    pub from_level: usize,
    pub lookahead: usize,
    pub seed: u64,
}

pub fn solvable(r: &mut Report, file: &str, module: Option<&str>, o: SolvableOpts, budget: &Budget) -> Result<()> {
    r.param("file", file);
    r.param("condition", if o.strong { "strong" } else { "weak" });
    r.param("depth", o.depth);
    r.param("from_level", o.from_level);
    r.param("lookahead", o.lookahead);
    r.param("seed", o.seed);
    let f = load_system(file)?;
    let d = active_module(&f, module)?;
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let opts = Options { lookahead: o.lookahead, seed: o.seed, ..Options::default() };
    let serial = match d.system.as_deref() {
        Some(sys) if o.strong && sys.kind == Kind::Pos01 => Some((sys, serial_audit(r, sys, budget)?)),
        _ => None,
    };
    // the chain graph decides extendability only when it covers the whole bound
    let extends = |u, w| match &serial {
        Some((sys, s)) if s.bound == sys.bound => s.extends(sys, u, w),
        _ => true,
    };
    for n in o.from_level..=o.depth {
        let v = if o.strong { check_strong_with(m, n, &opts, budget, &extends)? } else { check_weak(m, n, &opts, budget)? };
        for w in &v.warnings {
            r.warn(w);
        }
        r.count(v.pairs_checked, format!("pairs at depth {n}"));
        r.count(v.parallel_checked, format!("parallel pairs at depth {n}"));
        if v.beyond_bound > 0 {
            r.info(format!("{} witnesses built beyond the bound and checked on carriers", v.beyond_bound));
        }
        for w in v.witnesses.iter().take(5) {
            r.witness(w);
        }
        if let Some(why) = v.describe_failure(m) {
            r.witness(why);
        }
        r.verdict(v.holds(), v.summary());
    }
    Ok(())
}

/// The parallel-pair argument for the smash-square system, checked on carriers.
fn serial_audit(r: &mut Report, sys: &System, budget: &Budget) -> Result<freyd::SerialReport> {
    let bound = sys.bound.min(4);
    let s = freyd::no_serial_squares(sys, bound, budget)?;
    r.count(s.blocked_pairs, format!("parallel pairs without a coequalizer within bound {bound}"));
    r.count(s.direct_clash, "of them with a point sent to 0 and to 1");
    r.count(s.configurations, "square configurations searched");
    for c in s.counterexamples.iter().take(5) {
        r.witness(c);
    }
    r.verdict(
        s.holds(),
        format!("no serially commutative square over a pair with a 0/1 clash within bound {bound} (exhaustive)"),
    );
    if s.indirect_squares > 0 {
        r.warn(format!(
            "{} blocked pairs have no direct 0/1 clash and admit {} serially commutative squares; \
             such a pair survives only as long as its successor pairs do",
            s.blocked_pairs - s.direct_clash,
            s.indirect_squares
        ));
        if let Some(x) = &s.indirect_example {
            r.info(format!("example: {x}"));
        }
    }
    r.count(s.unblocked_successors, "square successors of blocked pairs with a coequalizer");
    r.count(s.infinite.len(), format!("blocked pairs starting an infinite chain of squares within bound {bound}"));
    r.verdict(
        s.unblocked_successors == 0 && s.infinite.is_empty(),
        "no parallel pair of complexes has a blocked component (exhaustive)",
    );
    Ok(s)
}

pub fn compact(r: &mut Report, file: &str, module: Option<&str>, spec: &str, depth: usize, budget: &Budget) -> Result<()> {
    r.param("file", file);
    r.param("diagram", spec);
    r.param("depth", depth);
    let f = load_system(file)?;
    let d = active_module(&f, module)?;
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let mut nodes = Vec::new();
    for item in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (o, label) = item
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("diagram node `{item}` is not of the form obj=label")))?;
        let a = object(m, o.trim())?;
        let e = elems(m, a, a)
            .find(|&e| m.label(e) == label.trim())
            .ok_or_else(|| Error::Unknown(format!("{} in M({o},{o})", label.trim())))?;
        nodes.push(LazyComplex::constant(e));
    }
    if nodes.is_empty() {
        return Err(Error::Invalid("the diagram has no nodes".into()));
    }
    let v = check_compact(m, &Diagram::discrete(nodes), depth, 200, budget)?;
    for (n, points, fin) in &v.levels {
        r.count(points, format!("cones at level {n}"));
        match fin {
            Some(s) => r.info(format!("level {n}: final subset of {} cones", s.len())),
            None => r.info(format!("level {n}: too large to materialize; nonemptiness only")),
        }
    }
    r.info("final subsets of finite preorders are finite; nonemptiness is the checked content");
    if let Some(n) = v.empty_level { r.witness(format!("no cone at level {n}")) }
    r.verdict(v.holds(), format!("cones exist at every level up to {depth}{}", scope(m)));
    Ok(())
}

pub fn koenig(r: &mut Report, path: &str, depth: Option<usize>) -> Result<()> {
    r.param("chainfile", path);
    let ch = load_chain(path)?;
    let depth = depth.unwrap_or(ch.depth());
    r.param("depth", depth);
    r.count(ch.levels.len(), "levels");
    let v = check_koenig_conditions(&ch);
    if let Some(fl) = &v.failure {
        r.witness(match fl {
            KoenigFailure::EmptyLevel(n) => format!("level {n} is empty"),
            KoenigFailure::NotMonotone { n, p, q } => format!("map {n} is not monotone on {p} <= {q}"),
            KoenigFailure::NotUpClosed { n, x, violating } => format!(
                "map {n}: the image of the upset of {} misses {}",
                ch.levels[*n + 1].names[*x],
                ch.levels[*n].names[*violating]
            ),
        });
    }
    r.verdict(v.holds(), "every level is nonempty and images of upsets are upsets");
    match thread(&ch, depth) {
        Ok(t) => {
            let names: Vec<&str> = t.iter().enumerate().map(|(n, &p)| ch.levels[n].names[p].as_str()).collect();
            r.item(format!("thread {}", names.join(" <- ")));
            r.verdict(true, format!("a thread reaches depth {depth}"));
        }
        Err(Error::EmptyLevel(n)) => {
            r.witness(format!("level {n} is empty"));
            r.verdict(false, format!("a thread reaches depth {depth}"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

pub fn final_approx(
    r: &mut Report,
    file: &str,
    module: Option<&str>,
    depth: usize,
    anchors: &[String],
    classes: bool,
    budget: &Budget,
) -> Result<()> {
    r.param("file", file);
    r.param("depth", depth);
    let f = load_system(file)?;
    let d = active_module(&f, module)?;
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let objs = objects(m, anchors)?;
    let names: Vec<&str> = objs.iter().map(|&a| m.base().obj_name(a)).collect();
    r.param("anchors", names.join(","));
    let ch = refinement_chain(m, &objs, depth, budget)?;
    let top = ch.levels.last().expect("level 0 always exists");
    for w in &top.warnings {
        r.warn(w);
    }
    if top.reduced {
        r.info("classes computed on generated pairs");
    }
    for &b in &objs {
        let name = m.base().obj_name(b);
        let counts = ch.counts(b);
        r.count(counts[depth], format!("classes anchor={name} depth={depth}{}", scope(m)));
        let shown: Vec<String> = counts.iter().map(usize::to_string).collect();
        r.info(format!("anchor {name}: classes by depth {}", shown.join(" ")));
        if depth > 0 {
            r.info(format!("anchor {name}: last refinement map is a bijection: {}", ch.stabilized(b)));
        }
        if classes {
            for k in top.classes(b) {
                r.item(k.render(m));
            }
        }
    }
    for k in 1..=depth {
        for &b in &objs {
            let s = structure_map(m, &ch.levels[k], &ch.levels[k - 1], b, budget)?;
            let name = m.base().obj_name(b);
            if !s.injective {
                r.witness(format!("ι_{k} at {name} identifies classes"));
            }
            if !s.surjective {
                r.witness(format!("ι_{k} at {name} misses coend classes"));
            }
            r.verdict(
                s.bijective(),
                format!("ι_{k} at {name} is a bijection onto {} coend classes", s.coend_classes),
            );
        }
    }
    Ok(())
}

pub fn solve(
    r: &mut Report,
    file: &str,
    module: Option<&str>,
    name: &str,
    depth: usize,
    anchors: &[String],
    budget: &Budget,
) -> Result<()> {
    r.param("file", file);
    r.param("coalgebra", name);
    r.param("depth", depth);
    let f = load_system(file)?;
    let e = f.coalgebra(name).ok_or_else(|| Error::Unknown(name.to_string()))?;
    let d = active_module(&f, module.or(Some(&e.module)))?;
    if d.name != e.module {
        return Err(Error::Invalid(format!("coalgebra {name} is for module {}, not {}", e.module, d.name)));
    }
    if !check_valid(r, d) {
        return Ok(());
    }
    let m = d.module.as_ref();
    let v = e.coalgebra.validate(m);
    if !v.is_empty() {
        for x in &v {
            r.invalid(format!("coalgebra {name}: {x}"));
        }
        return Ok(());
    }
    let objs = if anchors.is_empty() { None } else { Some(objects(m, anchors)?) };
    let sol = solve_coalgebra(m, &e.coalgebra, depth, objs.as_deref(), budget)?;
    for w in &sol.upper.warnings {
        r.warn(w);
    }
    let c = m.base();
    let x = &e.coalgebra.carrier;
    for a in objs.clone().unwrap_or_else(|| c.objects().collect()) {
        let at = sol.upper.at(a)?;
        for (xi, &k) in sol.classes[a.idx()].iter().enumerate() {
            let (cx, g) = at.rep(k);
            r.item(format!(
                "{} at {} -> class {k} : {} ; head-map = {}",
                x.values[a.idx()][xi],
                c.obj_name(a),
                cx.render(m),
                c.mor_name(*g)
            ));
        }
    }
    for (a, xi) in &sol.failures {
        r.witness(format!("square fails at {} over {}", x.values[a.idx()][*xi], c.obj_name(*a)));
    }
    r.verdict(sol.commutes(), format!("sol_{depth} commutes with the structure maps{}", scope(m)));
    match sol.unique() {
        Some(u) => {
            r.count(sol.candidates.unwrap_or(0), "natural maps satisfying the squares");
            r.verdict(u, format!("sol_{depth} is the unique such map"));
        }
        None => r.info("uniqueness not checked: the anchored carrier is too large"),
    }
    Ok(())
}
