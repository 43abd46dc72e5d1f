//! The endofunctors `Φ` on carriers.
//!
//! An element of `Φ(a)` decodes to a shape tag plus at most two arguments in
//! `a`. Functoriality is `Φ(f)(shape, args) = encode(shape, f(args))`.

use super::carrier::Carrier;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endo {
    /// `X ↦ Alph × X`.
    Streams { alphabet: u32 },
    /// `X ↦ X × X + Labels`.
    Trees { labels: u32 },
    /// `X ↦ X ∨ X`, two copies glued top-of-left to bottom-of-right.
    Smash,
    /// `X ↦ X * ω` cut at `height` copies, optionally followed by a top point.
    LinOmega { height: u32, top: bool },
}

/// Shape tags for the smash coproduct.
pub const LEFT: u32 = 0;
pub const GLUE: u32 = 1;
pub const RIGHT: u32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub tag: u32,
    pub args: [u32; 2],
    pub arity: u8,
}

impl Shape {
    fn new(tag: u32, args: &[u32]) -> Self {
        let mut a = [0; 2];
        a[..args.len()].copy_from_slice(args);
        Shape { tag, args: a, arity: args.len() as u8 }
    }

    pub fn args(&self) -> &[u32] {
        &self.args[..self.arity as usize]
    }
}

impl Endo {
    pub fn size(&self, n: usize) -> usize {
        match *self {
            Endo::Streams { alphabet } => alphabet as usize * n,
            Endo::Trees { labels } => n * n + labels as usize,
            Endo::Smash => 2 * n - 1,
            Endo::LinOmega { height, top } => height as usize * n + top as usize,
        }
    }

    pub fn carrier(&self, a: &Carrier) -> Carrier {
        let n = a.n;
        let size = self.size(n);
        match self {
            Endo::Streams { .. } | Endo::Trees { .. } => Carrier::discrete(size),
            Endo::LinOmega { .. } => Carrier::chain(size),
            Endo::Smash => Carrier::from_fn(size, |e1, e2| {
                let (s1, s2) = (self.decode(n, e1 as u32), self.decode(n, e2 as u32));
                match (s1.tag, s2.tag) {
                    (LEFT, LEFT) | (RIGHT, RIGHT) => a.le(s1.args[0] as usize, s2.args[0] as usize),
                    (t1, t2) => t1 <= t2,
                }
            }),
        }
    }

    pub fn decode(&self, n: usize, e: u32) -> Shape {
        let e = e as usize;
        match *self {
            Endo::Streams { .. } => Shape::new((e / n) as u32, &[(e % n) as u32]),
            Endo::Trees { .. } => {
                if e < n * n {
                    Shape::new(0, &[(e / n) as u32, (e % n) as u32])
                } else {
                    Shape::new(1 + (e - n * n) as u32, &[])
                }
            }
            Endo::Smash => {
                if e + 1 < n {
                    Shape::new(LEFT, &[e as u32])
                } else if e + 1 == n {
                    Shape::new(GLUE, &[])
                } else {
                    Shape::new(RIGHT, &[(e + 1 - n) as u32])
                }
            }
            Endo::LinOmega { height, .. } => {
                if e < height as usize * n {
                    Shape::new((e / n) as u32, &[(e % n) as u32])
                } else {
                    Shape::new(height, &[])
                }
            }
        }
    }

    /// Encodes a shape over a carrier with `n` elements, normalizing glue points.
    pub fn encode(&self, n: usize, tag: u32, args: &[u32]) -> u32 {
        let n32 = n as u32;
        match *self {
            Endo::Streams { .. } => tag * n32 + args[0],
            Endo::Trees { .. } => {
                if tag == 0 {
                    args[0] * n32 + args[1]
                } else {
                    n32 * n32 + tag - 1
                }
            }
            Endo::Smash => match tag {
                LEFT => args[0],
                GLUE => n32 - 1,
                _ => n32 - 1 + args[0],
            },
            Endo::LinOmega { height, .. } => {
                if tag < height {
                    tag * n32 + args[0]
                } else {
                    height * n32
                }
            }
        }
    }

    /// `Φ(f)` for `f: a → b` with `|a| = f.len()`, `|b| = nb`.
    pub fn map(&self, f: &[u32], nb: usize) -> Vec<u32> {
        let na = f.len();
        (0..self.size(na) as u32).map(|e| self.map_elem(f, nb, e)).collect()
    }

    pub fn map_elem(&self, f: &[u32], nb: usize, e: u32) -> u32 {
        let s = self.decode(f.len(), e);
        let mut args = [0u32; 2];
        for (i, &x) in s.args().iter().enumerate() {
            args[i] = f[x as usize];
        }
        self.encode(nb, s.tag, &args[..s.arity as usize])
    }

    /// Arguments of `e ∈ Φ(a)` in `a`.
    pub fn support(&self, n: usize, e: u32) -> Vec<u32> {
        self.decode(n, e).args().to_vec()
    }

    pub fn elem_name(&self, n: usize, e: u32) -> String {
        let s = self.decode(n, e);
        match *self {
            Endo::Streams { .. } => format!("{}.{}", s.tag, s.args[0]),
            Endo::Trees { .. } => {
                if s.arity == 2 {
                    format!("({},{})", s.args[0], s.args[1])
                } else {
                    format!("leaf{}", s.tag - 1)
                }
            }
            Endo::Smash => match s.tag {
                LEFT => format!("L{}", s.args[0]),
                GLUE => "G".into(),
                _ => format!("R{}", s.args[0]),
            },
            Endo::LinOmega { height, .. } => {
                if s.tag < height {
                    format!("{}w{}", s.args[0], s.tag)
                } else {
                    "T".into()
                }
            }
        }
    }

    /// Whether `Φ(f)(e) = e2` can be met, given the argument images fixed so
    /// far; returns every completion of the unassigned arguments.
    pub fn solve(&self, na: usize, nb: usize, e: u32, e2: u32, f: &[Option<u32>]) -> Vec<Vec<(u32, u32)>> {
        let s = self.decode(na, e);
        let args = s.args();
        let free: Vec<u32> = {
            let mut v: Vec<u32> = args.iter().copied().filter(|&x| f[x as usize].is_none()).collect();
            v.dedup();
            v
        };
        let mut out = Vec::new();
        let total = (nb as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut assign: Vec<(u32, u32)> = Vec::with_capacity(free.len());
            for &x in &free {
                assign.push((x, (c % nb as u64) as u32));
                c /= nb as u64;
            }
            let val = |x: u32| -> u32 {
                f[x as usize].unwrap_or_else(|| assign.iter().find(|p| p.0 == x).expect("free").1)
            };
            let mapped: Vec<u32> = args.iter().map(|&x| val(x)).collect();
            if self.encode(nb, s.tag, &mapped) == e2 {
                out.push(assign);
            }
        }
        out
    }
}
