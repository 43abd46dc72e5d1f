use std::fmt::Write;

use selfsim::builtin::System;
use selfsim::fincat::{validate_category, Category};
use selfsim::finalcoalg::solve;
use selfsim::format::{parse_chain, parse_system};
use selfsim::module::{flat_check, validate_module, validate_pointing, Module};
use selfsim::solvability::check_koenig_conditions;
use selfsim::{Budget, Error};

const TERMINAL: &str = "\
# the terminal category
category one
object x
";

const ARROW: &str = "\
category arrow
object a
object b
morphism f : a -> b

module hom on arrow
element ea : a -/-> a
element eb : b -/-> b
element ef : a -/-> b   # the broken arrow under f
lact eb @ f = ef
ract f @ ea = ef
point id:a = ea
point id:b = eb
point f = ef

functor X on arrow
value a = { p, q }
value b = { r }
fmap f p = r
fmap f q = r

coalgebra e : X -> hom (.) X
e a p = ea (*) q
e a q = ea (*) p
e b r = eb (*) r
";

fn parse_err(text: &str) -> (usize, usize, String) {
    match parse_system(text) {
        Err(Error::Parse { line, col, msg }) => (line, col, msg),
        Err(e) => panic!("expected a parse error, got {e}"),
        Ok(_) => panic!("expected a parse error"),
    }
}

#[test]
fn terminal_category_parses() {
    let f = parse_system(TERMINAL).unwrap();
    assert_eq!(f.categories.len(), 1);
    let c = &f.categories[0];
    assert_eq!(c.num_objects(), 1);
    assert_eq!(c.morphisms().count(), 1);
    assert!(validate_category(c).is_empty());
}

#[test]
fn full_file_parses_and_validates() {
    let f = parse_system(ARROW).unwrap();
    let m = f.module("hom").unwrap();
    assert!(validate_module(m.module.as_ref()).is_empty());
    for a in m.base.objects() {
        assert!(flat_check(m.module.as_ref(), a).holds());
    }
    assert!(validate_pointing(m.module.as_ref(), m.pointing.as_ref().unwrap()).is_empty());
    let x = &f.functors[0];
    assert!(x.validate().is_empty());
    let e = f.coalgebra("e").unwrap();
    assert_eq!(e.module, "hom");
    assert!(e.coalgebra.validate(m.module.as_ref()).is_empty());
}

#[test]
fn errors_carry_positions() {
    assert_eq!(parse_err("category c\nobject x\nobject x\n"), (3, 8, "invalid input: object `x` declared twice".into()));
    let (l, c, msg) = parse_err("category c\nobject x\nmorphism f : x -> y\n");
    assert_eq!((l, c), (3, 19));
    assert!(msg.contains("unknown object `y`"));
    let (l, c, _) = parse_err("category c\nobject x\nmorphism f x -> x\n");
    assert_eq!((l, c), (3, 12));
    let (l, c, _) = parse_err("category c\nobject x $\n");
    assert_eq!((l, c), (2, 10));
    let (l, _, msg) = parse_err("object x\n");
    assert_eq!(l, 1);
    assert!(msg.contains("not allowed"));
    let (l, c, msg) = parse_err("category c\nobject x\nmorphism id:y : x -> x\n");
    assert_eq!((l, c), (3, 10));
    assert!(msg.contains("reserved"));
    let (l, c, _) = parse_err("category c\nobject x\ncompose f . f = f\n");
    assert_eq!((l, c), (3, 9));
    let (l, c, _) = parse_err("module builtin:streams(alphabet=2\n");
    assert_eq!((l, c), (1, 8));
}

#[test]
fn module_errors() {
    let (l, _, msg) = parse_err("module m on nowhere\n");
    assert_eq!(l, 1);
    assert!(msg.contains("unknown category"));
    let text = ARROW.replace("point f = ef\n", "");
    let (l, _, msg) = parse_err(&text);
    assert_eq!(l, 6);
    assert!(msg.contains("pointing misses morphism `f`"));
    let text = ARROW.replace("e b r = eb (*) r\n", "");
    let (_, _, msg) = parse_err(&text);
    assert!(msg.contains("undefined at `r`"));
    let text = ARROW.replace("lact eb @ f = ef", "lact eb @ f = eb");
    let (l, _, msg) = parse_err(&text);
    assert_eq!(l, 10);
    assert!(msg.contains("wrong type"));
}

/// A constant two-state coalgebra for the stream module, written out as text.
fn stream_coalgebra_text(sys: &System) -> String {
    let c = sys.base();
    let mut t = format!("module builtin:{}\n\nfunctor X on \"{}\"\n", sys.key(), sys.key());
    for a in c.objects() {
        writeln!(t, "value {} = {{ p, q }}", c.obj_name(a)).unwrap();
    }
    for f in c.morphisms() {
        for x in ["p", "q"] {
            writeln!(t, "fmap \"{}\" {x} = {x}", c.mor_name(f)).unwrap();
        }
    }
    writeln!(t, "\ncoalgebra alt : X -> \"{}\" (.) X", sys.key()).unwrap();
    for a in c.objects() {
        let n = sys.carrier(a).n;
        let letter = |k: u32| {
            let m = sys.elem(a, a, &(0..n as u32).map(|y| sys.endo.encode(n, k, &[y])).collect::<Vec<_>>()).unwrap();
            sys.label(m)
        };
        writeln!(t, "e {} p = {} (*) q", c.obj_name(a), letter(0)).unwrap();
        writeln!(t, "e {} q = {} (*) p", c.obj_name(a), letter(1)).unwrap();
    }
    t
}

#[test]
fn coalgebra_over_a_builtin_round_trips() {
    let sys = System::streams(2, 3);
    let f = parse_system(&stream_coalgebra_text(&sys)).unwrap();
    let m = &f.modules[0];
    assert!(m.system.is_some());
    let e = &f.coalgebra("alt").unwrap().coalgebra;
    assert!(e.validate(m.module.as_ref()).is_empty());
    let one = sys.object_by_size(1).unwrap();
    let sol = solve(m.module.as_ref(), e, 3, Some(&[one]), &Budget::unlimited()).unwrap();
    assert!(sol.commutes());
    assert_ne!(sol.classes[one.idx()][0], sol.classes[one.idx()][1]);
}

const CHAIN: &str = "\
preorder P0
point a b
le a <= b
preorder P1
point x y z
le x <= y
map f : P1 -> P0
send x = a
send y = b
send z = b
";

#[test]
fn chains_parse() {
    let ch = parse_chain(CHAIN).unwrap();
    assert_eq!(ch.levels.len(), 2);
    assert_eq!(ch.levels[1].len(), 3);
    assert_eq!(ch.maps[0].map, vec![0, 1, 1]);
    assert!(ch.levels[0].le(0, 1) && !ch.levels[0].le(1, 0));
    let v = check_koenig_conditions(&ch);
    assert!(v.holds());
    // a map must follow both of its preorders
    let swapped = "preorder P1\npoint x\nmap f : P1 -> P0\nsend x = a\npreorder P0\npoint a\n";
    assert!(parse_chain(swapped).is_err());
    // the level order comes from the maps, not from declaration order
    let ordered = "preorder P1\npoint x\npreorder P0\npoint a\nmap f : P1 -> P0\nsend x = a\n";
    let ch = parse_chain(ordered).unwrap();
    assert_eq!(ch.levels[0].len(), 1);
}

#[test]
fn chain_errors() {
    let missing = CHAIN.replace("send z = b\n", "");
    match parse_chain(&missing) {
        Err(Error::Parse { line, msg, .. }) => {
            assert_eq!(line, 7);
            assert!(msg.contains("`z`"));
        }
        other => panic!("{other:?}"),
    }
    match parse_chain("preorder P\npoint a\nle a <= c\n") {
        Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (3, 9)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_chain("preorder P\npreorder Q\n"), Err(Error::Parse { .. })));
}

#[test]
fn identity_module_declaration() {
    let f = parse_system("category d\nobject x\nobject y\nmodule hom on d = identity\n").unwrap();
    let m = f.module("hom").unwrap();
    assert!(m.module.is_identity());
    assert_eq!(m.name, "hom");
    let (l, c, _) = parse_err("category d\nobject x\nmodule hom on d = table\n");
    assert_eq!((l, c), (3, 19));
    let (l, _, msg) = parse_err("category d\nobject x\nmodule hom on d = identity\nelement e : x -/-> x\n");
    assert_eq!(l, 4);
    assert!(msg.contains("not allowed"));
}
