//! Line-oriented text formats for categories, modules, functors, coalgebras
//! and preorder chains. `#` starts a comment; errors carry line and column.
//!
//! Identifiers are `[A-Za-z0-9_:]+`. Names that do not fit (labels of builtin
//! elements, builtin morphism names) may be written in double quotes, and an
//! element label of the form `<…>` is read as a single token.
//!
//! Besides table modules, a module section may name a builtin
//! (`module builtin:streams(alphabet=2,bound=4)`) or the identity module of a
//! declared category (`module <name> on <category> = identity`); neither takes
//! a body.

use std::collections::HashMap;
use std::sync::Arc;

use crate::builtin::System;
use crate::error::{Error, Result};
use crate::fincat::{Category, CategoryBuilder, FinCategory, FinPreorder, Mor, MonotoneMap, Obj};
use crate::module::{elems, Coalgebra, CoendPair, Elem, FinSetFunctor, IdentityModule, Module, Pointing, TableModule};
use crate::solvability::PreorderChain;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Tok {
    text: String,
    col: usize,
    quoted: bool,
}

const PUNCT: [&str; 12] = ["-/->", "(.)", "(*)", "->", "<=", ":", ".", "=", "@", "{", "}", ","];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == ':'
}

fn lex(line: &str, ln: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Tok { text: chars[start..i].iter().collect(), col, quoted: false });
            continue;
        }
        if c == '"' || (c == '<' && chars.get(i + 1) != Some(&'=')) {
            let close = if c == '"' { '"' } else { '>' };
            let end = (i + 1..chars.len())
                .find(|&j| chars[j] == close)
                .ok_or_else(|| perr(ln, col, format!("unterminated `{c}`")))?;
            let text: String = if c == '"' { chars[i + 1..end].iter().collect() } else { chars[i..=end].iter().collect() };
            out.push(Tok { text, col, quoted: true });
            i = end + 1;
            continue;
        }
        let rest: String = chars[i..].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Tok { text: p.to_string(), col, quoted: false });
                i += p.chars().count();
            }
            None => return Err(perr(ln, col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Cursor over the tokens of one line.
struct Line<'a> {
    ln: usize,
    toks: &'a [Tok],
    pos: usize,
    len: usize,
}

impl<'a> Line<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len + 1, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.ln, self.col(), msg)
    }

    fn name(&mut self, what: &str) -> Result<&'a Tok> {
        match self.toks.get(self.pos) {
            Some(t) if t.quoted || t.text.chars().all(is_ident_char) => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn punct(&mut self, p: &str) -> Result<()> {
        match self.toks.get(self.pos) {
            Some(t) if !t.quoted && t.text == p => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{p}`"))),
        }
    }

    fn at(&self, p: &str) -> bool {
        self.toks.get(self.pos).is_some_and(|t| !t.quoted && t.text == p)
    }

    fn end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }
}

fn unknown(t: &Tok, ln: usize, what: &str) -> Error {
    perr(ln, t.col, format!("unknown {what} `{}`", t.text))
}

/// A parsed module together with what the rest of the file needs from it.
#[derive(Clone)]
pub struct ModuleDecl {
    pub name: String,
    pub module: Arc<dyn Module>,
    /// Set for `builtin:` references.
    pub system: Option<Arc<System>>,
    pub base: Arc<FinCategory>,
    pub pointing: Option<Pointing>,
}

#[derive(Clone)]
pub struct CoalgebraDecl {
    pub coalgebra: Coalgebra,
    pub module: String,
}

/// Everything declared in a system file, in declaration order.
#[derive(Clone, Default)]
pub struct SystemFile {
    pub categories: Vec<Arc<FinCategory>>,
    pub modules: Vec<ModuleDecl>,
    pub functors: Vec<FinSetFunctor>,
    pub coalgebras: Vec<CoalgebraDecl>,
}

impl SystemFile {
    /// A file consisting of a single builtin reference.
    pub fn builtin(key: &str) -> Result<Self> {
        let sys = Arc::new(System::from_key(key)?);
        let mut f = SystemFile::default();
        f.modules.push(builtin_decl(sys));
        Ok(f)
    }

    pub fn category(&self, name: &str) -> Option<&Arc<FinCategory>> {
        self.categories.iter().find(|c| c.name() == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn coalgebra(&self, name: &str) -> Option<&CoalgebraDecl> {
        self.coalgebras.iter().find(|c| c.coalgebra.name == name)
    }

    fn base_named(&self, name: &str) -> Option<Arc<FinCategory>> {
        self.category(name)
            .cloned()
            .or_else(|| self.modules.iter().find(|m| m.name == name || m.base.name() == name).map(|m| m.base.clone()))
    }
}

fn builtin_decl(sys: Arc<System>) -> ModuleDecl {
    ModuleDecl {
        name: sys.key().to_string(),
        base: sys.cat_arc(),
        module: sys.clone(),
        system: Some(sys),
        pointing: None,
    }
}

enum Section {
    None,
    Category { builder: CategoryBuilder },
    Module { table: TableModule, points: HashMap<Mor, Elem>, line: usize },
    Builtin,
    Functor { functor: FinSetFunctor },
    Coalgebra { name: String, functor: usize, module: usize, entries: Vec<Vec<Option<CoendPair>>>, line: usize },
}

/// Parses a system file.
pub fn parse_system(text: &str) -> Result<SystemFile> {
    let mut file = SystemFile::default();
    let mut sec = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if let Some(key) = body.trim_start().strip_prefix("module").map(str::trim).filter(|k| k.starts_with("builtin:")) {
            finish(&mut file, std::mem::replace(&mut sec, Section::None))?;
            let col = body.find("builtin:").unwrap_or(0) + 1;
            let sys = System::from_key(key).map_err(|e| perr(ln, col, e.to_string()))?;
            file.modules.push(builtin_decl(Arc::new(sys)));
            sec = Section::Builtin;
            continue;
        }
        let toks = lex(raw, ln)?;
        let Some(head) = toks.first() else { continue };
        let mut l = Line { ln, toks: &toks, pos: 1, len: raw.chars().count() };
        match head.text.as_str() {
            "category" => {
                finish(&mut file, std::mem::replace(&mut sec, Section::None))?;
                let name = l.name("a category name")?;
                l.end()?;
                if file.category(&name.text).is_some() {
                    return Err(perr(ln, name.col, format!("category `{}` declared twice", name.text)));
                }
                sec = Section::Category { builder: CategoryBuilder::new(&name.text) };
            }
            "module" => {
                finish(&mut file, std::mem::replace(&mut sec, Section::None))?;
                let name = l.name("a module name")?;
                if l.toks.get(l.pos).is_some_and(|t| t.text == "on") {
                    l.pos += 1;
                } else {
                    return Err(l.err("expected `on`"));
                }
                let cat_tok = l.name("a category name")?;
                let identity = l.at("=");
                if identity {
                    l.pos += 1;
                    match l.toks.get(l.pos) {
                        Some(t) if t.text == "identity" => l.pos += 1,
                        _ => return Err(l.err("expected `identity`")),
                    }
                }
                l.end()?;
                if file.module(&name.text).is_some() {
                    return Err(perr(ln, name.col, format!("module `{}` declared twice", name.text)));
                }
                let cat = file.category(&cat_tok.text).cloned().ok_or_else(|| unknown(cat_tok, ln, "category"))?;
                if identity {
                    file.modules.push(ModuleDecl {
                        name: name.text.clone(),
                        module: Arc::new(IdentityModule::new(cat.clone())),
                        system: None,
                        base: cat,
                        pointing: None,
                    });
                    sec = Section::Builtin;
                    continue;
                }
                sec = Section::Module { table: TableModule::new(&name.text, cat), points: HashMap::new(), line: ln };
            }
            "functor" => {
                finish(&mut file, std::mem::replace(&mut sec, Section::None))?;
                let name = l.name("a functor name")?;
                if l.toks.get(l.pos).is_some_and(|t| t.text == "on") {
                    l.pos += 1;
                } else {
                    return Err(l.err("expected `on`"));
                }
                let cat_tok = l.name("a category name")?;
                l.end()?;
                let cat = file.base_named(&cat_tok.text).ok_or_else(|| unknown(cat_tok, ln, "category"))?;
                let values = vec![Vec::new(); cat.num_objects()];
                sec = Section::Functor { functor: FinSetFunctor::new(&name.text, cat, values) };
            }
            "coalgebra" => {
                finish(&mut file, std::mem::replace(&mut sec, Section::None))?;
                let name = l.name("a coalgebra name")?;
                l.punct(":")?;
                let x = l.name("a functor name")?;
                l.punct("->")?;
                let m = l.name("a module name")?;
                l.punct("(.)")?;
                let x2 = l.name("a functor name")?;
                l.end()?;
                let fi = file.functors.iter().position(|f| f.name == x.text).ok_or_else(|| unknown(x, ln, "functor"))?;
                if x2.text != x.text {
                    return Err(perr(ln, x2.col, "the coalgebra must map a functor into M applied to itself"));
                }
                let mi = file.modules.iter().position(|d| d.name == m.text).ok_or_else(|| unknown(m, ln, "module"))?;
                if !Arc::ptr_eq(&file.modules[mi].base, &file.functors[fi].base)
                    && file.modules[mi].base.name() != file.functors[fi].base.name()
                {
                    return Err(perr(ln, m.col, "module and functor live on different categories"));
                }
                let entries = file.functors[fi].values.iter().map(|v| vec![None; v.len()]).collect();
                sec = Section::Coalgebra { name: name.text.clone(), functor: fi, module: mi, entries, line: ln };
            }
            kw => body_line(&file, &mut sec, kw, &mut l)?,
        }
    }
    finish(&mut file, sec)?;
    Ok(file)
}

fn body_line(file: &SystemFile, sec: &mut Section, kw: &str, l: &mut Line) -> Result<()> {
    let ln = l.ln;
    let head_col = l.toks[0].col;
    let misplaced = || perr(ln, head_col, format!("`{kw}` is not allowed here"));
    match (kw, sec) {
        ("object", Section::Category { builder, .. }) => {
            let id = l.name("an object id")?;
            l.end()?;
            builder.object(&id.text).map_err(|e| perr(ln, id.col, e.to_string()))?;
        }
        ("morphism", Section::Category { builder, .. }) => {
            let id = l.name("a morphism id")?;
            l.punct(":")?;
            let s = l.name("an object")?;
            l.punct("->")?;
            let d = l.name("an object")?;
            l.end()?;
            let s_o = builder.object_id(&s.text).ok_or_else(|| unknown(s, ln, "object"))?;
            let d_o = builder.object_id(&d.text).ok_or_else(|| unknown(d, ln, "object"))?;
            builder.morphism(&id.text, s_o, d_o).map_err(|e| perr(ln, id.col, e.to_string()))?;
        }
        ("compose", Section::Category { builder, .. }) => {
            let g = l.name("a morphism")?;
            l.punct(".")?;
            let f = l.name("a morphism")?;
            l.punct("=")?;
            let h = l.name("a morphism")?;
            l.end()?;
            let look = |t: &Tok| builder.morphism_id(&t.text).ok_or_else(|| unknown(t, ln, "morphism"));
            let (gm, fm) = (look(g)?, look(f)?);
            if let Some(o) = h.text.strip_prefix("id:") {
                if builder.object_id(o).is_none() {
                    return Err(unknown(h, ln, "morphism"));
                }
                builder.compose_to_identity(gm, fm);
            } else {
                let hm = look(h)?;
                builder.compose(gm, fm, hm);
            }
        }
        ("element", Section::Module { table, .. }) => {
            let id = l.name("an element id")?;
            l.punct(":")?;
            let a = l.name("an object")?;
            l.punct("-/->")?;
            let b = l.name("an object")?;
            l.end()?;
            let base = table.base_arc().clone();
            let ao = base.object(&a.text).ok_or_else(|| unknown(a, ln, "object"))?;
            let bo = base.object(&b.text).ok_or_else(|| unknown(b, ln, "object"))?;
            if table.element(&id.text).is_some() {
                return Err(perr(ln, id.col, format!("element `{}` declared twice", id.text)));
            }
            table.add_element(&id.text, ao, bo);
        }
        ("lact", Section::Module { table, .. }) => {
            let m = l.name("an element")?;
            l.punct("@")?;
            let f = l.name("a morphism")?;
            l.punct("=")?;
            let r = l.name("an element")?;
            l.end()?;
            let (me, fm, re) = (table_elem(table, m, ln)?, table_mor(table, f, ln)?, table_elem(table, r, ln)?);
            let c = table.base_arc().clone();
            if c.dst(fm) != me.src || re.src != c.src(fm) || re.dst != me.dst {
                return Err(perr(ln, r.col, "left action has the wrong type"));
            }
            table.set_lact(me, fm, re);
        }
        ("ract", Section::Module { table, .. }) => {
            let g = l.name("a morphism")?;
            l.punct("@")?;
            let m = l.name("an element")?;
            l.punct("=")?;
            let r = l.name("an element")?;
            l.end()?;
            let (gm, me, re) = (table_mor(table, g, ln)?, table_elem(table, m, ln)?, table_elem(table, r, ln)?);
            let c = table.base_arc().clone();
            if c.src(gm) != me.dst || re.dst != c.dst(gm) || re.src != me.src {
                return Err(perr(ln, r.col, "right action has the wrong type"));
            }
            table.set_ract(gm, me, re);
        }
        ("point", Section::Module { table, points, .. }) => {
            let f = l.name("a morphism")?;
            l.punct("=")?;
            let m = l.name("an element")?;
            l.end()?;
            let (fm, me) = (table_mor(table, f, ln)?, table_elem(table, m, ln)?);
            if points.insert(fm, me).is_some() {
                return Err(perr(ln, f.col, format!("`{}` is pointed twice", f.text)));
            }
        }
        ("value", Section::Functor { functor }) => {
            let o = l.name("an object")?;
            l.punct("=")?;
            l.punct("{")?;
            let mut vals = Vec::new();
            while !l.at("}") {
                if !vals.is_empty() {
                    l.punct(",")?;
                }
                let v = l.name("an element")?;
                if vals.contains(&v.text) {
                    return Err(perr(ln, v.col, format!("`{}` listed twice", v.text)));
                }
                vals.push(v.text.clone());
            }
            l.punct("}")?;
            l.end()?;
            let a = functor.base.object(&o.text).ok_or_else(|| unknown(o, ln, "object"))?;
            let c = functor.base.clone();
            functor.values[a.idx()] = vals;
            for f in c.morphisms().filter(|&f| c.src(f) == a) {
                let n = functor.values[a.idx()].len();
                functor.action[f.idx()] =
                    if f == c.identity(c.src(f)) { (0..n).collect() } else { vec![usize::MAX; n] };
            }
        }
        ("fmap", Section::Functor { functor }) => {
            let f = l.name("a morphism")?;
            let x = l.name("an element")?;
            l.punct("=")?;
            let y = l.name("an element")?;
            l.end()?;
            let c = functor.base.clone();
            let fm = c.morphism(&f.text).ok_or_else(|| unknown(f, ln, "morphism"))?;
            let xi = functor.find(c.src(fm), &x.text).ok_or_else(|| unknown(x, ln, "element of the source"))?;
            let yi = functor.find(c.dst(fm), &y.text).ok_or_else(|| unknown(y, ln, "element of the target"))?;
            functor.action[fm.idx()][xi] = yi;
        }
        ("e", Section::Coalgebra { functor, module, entries, .. }) => {
            let x = &file.functors[*functor];
            let decl = &file.modules[*module];
            let o = l.name("an object")?;
            let xt = l.name("an element")?;
            l.punct("=")?;
            let m = l.name("a module element")?;
            l.punct("(*)")?;
            let x2 = l.name("an element")?;
            l.end()?;
            let a = x.base.object(&o.text).ok_or_else(|| unknown(o, ln, "object"))?;
            let xi = x.find(a, &xt.text).ok_or_else(|| unknown(xt, ln, "element"))?;
            let me = module_elem(decl, a, &m.text).ok_or_else(|| unknown(m, ln, "module element into this object"))?;
            let x2i = x.find(me.src, &x2.text).ok_or_else(|| unknown(x2, ln, "element of the element's source"))?;
            if entries[a.idx()][xi].replace(CoendPair { m: me, x: x2i }).is_some() {
                return Err(perr(ln, xt.col, format!("e is defined twice at `{}`", xt.text)));
            }
        }
        _ => return Err(misplaced()),
    }
    Ok(())
}

fn table_elem(t: &TableModule, tok: &Tok, ln: usize) -> Result<Elem> {
    t.element(&tok.text).ok_or_else(|| unknown(tok, ln, "element"))
}

fn table_mor(t: &TableModule, tok: &Tok, ln: usize) -> Result<Mor> {
    t.base_arc().morphism(&tok.text).ok_or_else(|| unknown(tok, ln, "morphism"))
}

/// An element of `M(-, a)` by label.
fn module_elem(d: &ModuleDecl, a: Obj, label: &str) -> Option<Elem> {
    let m = d.module.as_ref();
    d.base.objects().flat_map(|s| elems(m, s, a)).find(|&e| m.label(e) == label)
}

fn finish(file: &mut SystemFile, sec: Section) -> Result<()> {
    match sec {
        Section::None | Section::Builtin => {}
        Section::Category { builder, .. } => file.categories.push(Arc::new(builder.build())),
        Section::Module { table, points, line } => {
            let base = table.base_arc().clone();
            let pointing = if points.is_empty() {
                None
            } else {
                let mut values = Vec::new();
                for f in base.morphisms() {
                    let e = points.get(&f).ok_or_else(|| {
                        perr(line, 1, format!("the pointing misses morphism `{}`", base.mor_name(f)))
                    })?;
                    values.push(*e);
                }
                Some(Pointing { values })
            };
            file.modules.push(ModuleDecl {
                name: table.name().to_string(),
                base,
                module: Arc::new(table),
                system: None,
                pointing,
            });
        }
        Section::Functor { functor } => file.functors.push(functor),
        Section::Coalgebra { name, functor, module, entries, line } => {
            let x = file.functors[functor].clone();
            let mut structure = Vec::new();
            for (a, row) in entries.into_iter().enumerate() {
                let mut out = Vec::new();
                for (xi, p) in row.into_iter().enumerate() {
                    out.push(p.ok_or_else(|| {
                        perr(line, 1, format!("e is undefined at `{}` over `{}`", x.values[a][xi], x.base.obj_name(Obj(a as u32))))
                    })?);
                }
                structure.push(out);
            }
            let module = file.modules[module].name.clone();
            file.coalgebras.push(CoalgebraDecl { coalgebra: Coalgebra { name, carrier: x, structure }, module });
        }
    }
    Ok(())
}

/// Parses a chain of preorders linked by maps `P_{n+1} → P_n`.
pub fn parse_chain(text: &str) -> Result<PreorderChain> {
    struct Pre {
        name: String,
        points: Vec<String>,
        le: Vec<(usize, usize)>,
        line: usize,
    }
    struct Map {
        src: usize,
        dst: usize,
        send: Vec<Option<usize>>,
        line: usize,
    }
    let mut pres: Vec<Pre> = Vec::new();
    let mut maps: Vec<Map> = Vec::new();
    let mut in_map = false;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = lex(raw, ln)?;
        let Some(head) = toks.first() else { continue };
        let mut l = Line { ln, toks: &toks, pos: 1, len: raw.chars().count() };
        let find = |pres: &[Pre], t: &Tok| pres.iter().position(|p| p.name == t.text).ok_or_else(|| unknown(t, ln, "preorder"));
        match head.text.as_str() {
            "preorder" => {
                let name = l.name("a preorder name")?;
                l.end()?;
                if pres.iter().any(|p| p.name == name.text) {
                    return Err(perr(ln, name.col, format!("preorder `{}` declared twice", name.text)));
                }
                pres.push(Pre { name: name.text.clone(), points: Vec::new(), le: Vec::new(), line: ln });
                in_map = false;
            }
            "point" if !in_map && !pres.is_empty() => {
                let p = pres.last_mut().expect("nonempty");
                while l.pos < toks.len() {
                    let t = l.name("a point id")?;
                    if p.points.contains(&t.text) {
                        return Err(perr(ln, t.col, format!("point `{}` declared twice", t.text)));
                    }
                    p.points.push(t.text.clone());
                }
            }
            "le" if !in_map && !pres.is_empty() => {
                let p = pres.last_mut().expect("nonempty");
                let a = l.name("a point")?;
                l.punct("<=")?;
                let b = l.name("a point")?;
                l.end()?;
                let ai = p.points.iter().position(|x| *x == a.text).ok_or_else(|| unknown(a, ln, "point"))?;
                let bi = p.points.iter().position(|x| *x == b.text).ok_or_else(|| unknown(b, ln, "point"))?;
                p.le.push((ai, bi));
            }
            "map" => {
                let _ = l.name("a map name")?;
                l.punct(":")?;
                let s = l.name("a preorder")?;
                l.punct("->")?;
                let d = l.name("a preorder")?;
                l.end()?;
                let (si, di) = (find(&pres, s)?, find(&pres, d)?);
                if maps.iter().any(|m| m.src == si) {
                    return Err(perr(ln, s.col, format!("`{}` already has a map", s.text)));
                }
                maps.push(Map { src: si, dst: di, send: vec![None; pres[si].points.len()], line: ln });
                in_map = true;
            }
            "send" if in_map => {
                let m = maps.last_mut().expect("in a map");
                let a = l.name("a point")?;
                l.punct("=")?;
                let b = l.name("a point")?;
                l.end()?;
                let ai = pres[m.src].points.iter().position(|x| *x == a.text).ok_or_else(|| unknown(a, ln, "point"))?;
                let bi = pres[m.dst].points.iter().position(|x| *x == b.text).ok_or_else(|| unknown(b, ln, "point"))?;
                if m.send[ai].replace(bi).is_some() {
                    return Err(perr(ln, a.col, format!("`{}` is sent twice", a.text)));
                }
            }
            kw => return Err(perr(ln, head.col, format!("`{kw}` is not allowed here"))),
        }
    }
    if pres.is_empty() {
        return Ok(PreorderChain { levels: Vec::new(), maps: Vec::new() });
    }
    // P_0 is the preorder no map leaves; follow maps backwards from it
    let sources: Vec<usize> = maps.iter().map(|m| m.src).collect();
    let roots: Vec<usize> = (0..pres.len()).filter(|i| !sources.contains(i)).collect();
    if roots.len() != 1 {
        let line = pres.get(roots.get(1).copied().unwrap_or(0)).map_or(1, |p| p.line);
        return Err(perr(line, 1, "the preorders do not form a single chain"));
    }
    let mut order = vec![roots[0]];
    let mut chain_maps = Vec::new();
    while let Some(m) = maps.iter().find(|m| m.dst == *order.last().expect("nonempty")) {
        if order.contains(&m.src) || maps.iter().filter(|k| k.dst == m.dst).count() > 1 {
            return Err(perr(m.line, 1, "the preorders do not form a single chain"));
        }
        let send: Vec<usize> = m
            .send
            .iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| perr(m.line, 1, format!("point `{}` is not sent anywhere", pres[m.src].points[k]))))
            .collect::<Result<_>>()?;
        chain_maps.push(MonotoneMap { map: send });
        order.push(m.src);
    }
    if order.len() != pres.len() {
        return Err(perr(pres[0].line, 1, "the preorders do not form a single chain"));
    }
    let levels = order.iter().map(|&i| FinPreorder::from_relation(pres[i].points.clone(), &pres[i].le)).collect();
    let ch = PreorderChain { levels, maps: chain_maps };
    ch.validate()?;
    Ok(ch)
}
