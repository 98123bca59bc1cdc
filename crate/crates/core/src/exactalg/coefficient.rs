//! Scalars: elements of F_p or of the perfect closure of F_p(params).
//!
//! A transcendental `ρ` carried at level `k` stands for `ρ̂^(p^k)` where `ρ̂` is the
//! symbol printed to the user; in other words the stored variable is the `p^k`-th root
//! of the declared parameter. Taking a p-th root therefore never fails: either all
//! exponents of a symbol are divisible by `p` and get divided, or the symbol's level is
//! bumped so that its exponents can be read as multiples of `p`.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::fp::{add_mod, from_i64, inv_mod, mul_mod, pow_mod, sub_mod, FpPoly, Mono, Sym};

type Levels = SmallVec<[(Sym, u32); 2]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coefficient {
    p: u64,
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Const(u64),
    Frac(Arc<Frac>),
}

#[derive(PartialEq, Eq, Hash)]
struct Frac {
    num: FpPoly,
    den: FpPoly,
    levels: Levels,
}

struct Parts {
    num: FpPoly,
    den: FpPoly,
    levels: Levels,
}

fn level_of(levels: &Levels, s: &str) -> u32 {
    levels.iter().find(|(x, _)| &**x == s).map(|(_, k)| *k).unwrap_or(0)
}

impl Coefficient {
    pub fn zero(p: u64) -> Self {
        Coefficient { p, repr: Repr::Const(0) }
    }

    pub fn one(p: u64) -> Self {
        Coefficient { p, repr: Repr::Const(1 % p) }
    }

    pub fn from_u64(p: u64, c: u64) -> Self {
        Coefficient { p, repr: Repr::Const(c % p) }
    }

    pub fn from_i64(p: u64, c: i64) -> Self {
        Coefficient { p, repr: Repr::Const(from_i64(c, p)) }
    }

    /// The transcendental named `name`.
    pub fn param(p: u64, name: &str) -> Self {
        Self::from_poly(FpPoly::var(p, Arc::from(name)))
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.p();
        Self::normalize(Parts { num, den: FpPoly::constant(p, 1), levels: Levels::new() })
    }

    /// `num/den` where the symbol `s` in both polynomials sits at the given level.
    pub fn from_parts(num: FpPoly, den: FpPoly, levels: &[(Sym, u32)]) -> Self {
        Self::normalize(Parts { num, den, levels: levels.iter().cloned().collect() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Const(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.repr, Repr::Const(1))
    }

    /// `Some(c)` when the coefficient lies in F_p.
    pub fn as_const(&self) -> Option<u64> {
        match self.repr {
            Repr::Const(c) => Some(c),
            Repr::Frac(_) => None,
        }
    }

    pub fn numerator(&self) -> FpPoly {
        match &self.repr {
            Repr::Const(c) => FpPoly::constant(self.p, *c),
            Repr::Frac(f) => f.num.clone(),
        }
    }

    pub fn denominator(&self) -> FpPoly {
        match &self.repr {
            Repr::Const(_) => FpPoly::constant(self.p, 1),
            Repr::Frac(f) => f.den.clone(),
        }
    }

    pub fn levels(&self) -> Vec<(Sym, u32)> {
        match &self.repr {
            Repr::Const(_) => Vec::new(),
            Repr::Frac(f) => f.levels.to_vec(),
        }
    }

    /// Largest perfection level among the transcendentals present.
    pub fn max_level(&self) -> u32 {
        match &self.repr {
            Repr::Const(_) => 0,
            Repr::Frac(f) => f.levels.iter().map(|(_, k)| *k).max().unwrap_or(0),
        }
    }

    /// Names of the transcendentals the value depends on.
    pub fn params(&self) -> Vec<Sym> {
        match &self.repr {
            Repr::Const(_) => Vec::new(),
            Repr::Frac(f) => f.num.vars().union(&f.den.vars()).cloned().collect(),
        }
    }

    fn parts(&self) -> Parts {
        match &self.repr {
            Repr::Const(c) => Parts {
                num: FpPoly::constant(self.p, *c),
                den: FpPoly::constant(self.p, 1),
                levels: Levels::new(),
            },
            Repr::Frac(f) => Parts { num: f.num.clone(), den: f.den.clone(), levels: f.levels.clone() },
        }
    }

    /// Brings two values to common perfection levels.
    fn aligned(&self, other: &Coefficient) -> (Parts, Parts) {
        let mut a = self.parts();
        let mut b = other.parts();
        let mut syms: Vec<Sym> = a.levels.iter().chain(b.levels.iter()).map(|(s, _)| s.clone()).collect();
        syms.sort();
        syms.dedup();
        let mut levels = Levels::new();
        for s in syms {
            let (la, lb) = (level_of(&a.levels, &s), level_of(&b.levels, &s));
            let t = la.max(lb);
            if la < t {
                let f = (self.p as u32).pow(t - la);
                a.num = a.num.scale_exponents(&s, f);
                a.den = a.den.scale_exponents(&s, f);
            }
            if lb < t {
                let f = (self.p as u32).pow(t - lb);
                b.num = b.num.scale_exponents(&s, f);
                b.den = b.den.scale_exponents(&s, f);
            }
            levels.push((s, t));
        }
        a.levels = levels.clone();
        b.levels = levels;
        (a, b)
    }

    fn normalize(mut x: Parts) -> Coefficient {
        let p = x.num.p();
        assert!(!x.den.is_zero(), "division by zero in F_{p}(params)");
        if x.num.is_zero() {
            return Coefficient::zero(p);
        }
        if let (Some(n), Some(d)) = (x.num.const_value(), x.den.const_value()) {
            return Coefficient::from_u64(p, mul_mod(n, inv_mod(d, p), p));
        }
        if x.den.const_value().is_none() {
            let g = x.num.gcd(&x.den);
            if !g.is_one() {
                x.num = x.num.div_exact(&g).expect("gcd divides numerator");
                x.den = x.den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let (den, lc) = x.den.monic();
        x.den = den;
        x.num = x.num.scale(inv_mod(lc, p));
        let mut levels = Levels::new();
        for (s, mut k) in x.levels.into_iter() {
            if !x.num.involves(&s) && !x.den.involves(&s) {
                continue;
            }
            while k > 0
                && x.num.exponents_divisible(&s, p as u32)
                && x.den.exponents_divisible(&s, p as u32)
            {
                x.num = x.num.divide_exponents(&s, p as u32).unwrap();
                x.den = x.den.divide_exponents(&s, p as u32).unwrap();
                k -= 1;
            }
            if k > 0 {
                levels.push((s, k));
            }
        }
        if let (Some(n), Some(d)) = (x.num.const_value(), x.den.const_value()) {
            return Coefficient::from_u64(p, mul_mod(n, inv_mod(d, p), p));
        }
        Coefficient { p, repr: Repr::Frac(Arc::new(Frac { num: x.num, den: x.den, levels })) }
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        if let (Repr::Const(a), Repr::Const(b)) = (&self.repr, &other.repr) {
            return Coefficient::from_u64(self.p, add_mod(*a, *b, self.p));
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = self.aligned(other);
        let (num, den) = if a.den == b.den {
            (a.num.add(&b.num), a.den)
        } else {
            (a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
        };
        Self::normalize(Parts { num, den, levels: a.levels })
    }

    pub fn neg(&self) -> Coefficient {
        match &self.repr {
            Repr::Const(c) => Coefficient::from_u64(self.p, sub_mod(0, *c, self.p)),
            Repr::Frac(f) => Coefficient {
                p: self.p,
                repr: Repr::Frac(Arc::new(Frac { num: f.num.neg(), den: f.den.clone(), levels: f.levels.clone() })),
            },
        }
    }

    pub fn sub(&self, other: &Coefficient) -> Coefficient {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        match (&self.repr, &other.repr) {
            (Repr::Const(a), Repr::Const(b)) => Coefficient::from_u64(self.p, mul_mod(*a, *b, self.p)),
            (Repr::Const(0), _) | (_, Repr::Const(0)) => Coefficient::zero(self.p),
            (Repr::Const(1), _) => other.clone(),
            (_, Repr::Const(1)) => self.clone(),
            (Repr::Const(a), Repr::Frac(f)) | (Repr::Frac(f), Repr::Const(a)) => Coefficient {
                p: self.p,
                repr: Repr::Frac(Arc::new(Frac { num: f.num.scale(*a), den: f.den.clone(), levels: f.levels.clone() })),
            },
            _ => {
                let (a, b) = self.aligned(other);
                Self::normalize(Parts { num: a.num.mul(&b.num), den: a.den.mul(&b.den), levels: a.levels })
            }
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Coefficient {
        match &self.repr {
            Repr::Const(c) => Coefficient::from_u64(self.p, inv_mod(*c, self.p)),
            Repr::Frac(f) => Self::normalize(Parts { num: f.den.clone(), den: f.num.clone(), levels: f.levels.clone() }),
        }
    }

    pub fn div(&self, other: &Coefficient) -> Coefficient {
        self.mul(&other.inv())
    }

    pub fn pow(&self, mut e: u64) -> Coefficient {
        if let Repr::Const(c) = self.repr {
            return Coefficient::from_u64(self.p, pow_mod(c, e, self.p));
        }
        let mut base = self.clone();
        let mut acc = Coefficient::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The unique p-th root in the perfect closure.
    pub fn pth_root(&self) -> Coefficient {
        let f = match &self.repr {
            Repr::Const(_) => return self.clone(),
            Repr::Frac(f) => f,
        };
        let p = self.p as u32;
        let mut num = f.num.clone();
        let mut den = f.den.clone();
        let mut levels = f.levels.clone();
        let syms: Vec<Sym> = num.vars().union(&den.vars()).cloned().collect();
        for s in syms {
            if num.exponents_divisible(&s, p) && den.exponents_divisible(&s, p) {
                num = num.divide_exponents(&s, p).unwrap();
                den = den.divide_exponents(&s, p).unwrap();
            } else if let Some(entry) = levels.iter_mut().find(|(x, _)| *x == s) {
                entry.1 += 1;
            } else {
                levels.push((s, 1));
                levels.sort();
            }
        }
        Self::normalize(Parts { num, den, levels })
    }

    /// Substitutes `value` for the declared parameter `sym`. `None` when the denominator
    /// vanishes at that value.
    pub fn specialize(&self, sym: &str, value: &Coefficient) -> Option<Coefficient> {
        let f = match &self.repr {
            Repr::Const(_) => return Some(self.clone()),
            Repr::Frac(f) => f,
        };
        if !f.num.involves(sym) && !f.den.involves(sym) {
            return Some(self.clone());
        }
        let mut v = value.clone();
        for _ in 0..level_of(&f.levels, sym) {
            v = v.pth_root();
        }
        let rest: Vec<(Sym, u32)> = f.levels.iter().filter(|(s, _)| &**s != sym).cloned().collect();
        let eval = |poly: &FpPoly| -> Coefficient {
            let mut acc = Coefficient::zero(self.p);
            for (e, c) in poly.coeffs_in(sym).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = Coefficient::from_parts(c, FpPoly::constant(self.p, 1), &rest);
                acc = acc.add(&c.mul(&v.pow(e as u64)));
            }
            acc
        };
        let den = eval(&f.den);
        if den.is_zero() {
            return None;
        }
        Some(eval(&f.num).div(&den))
    }

    /// Writes the parts with exponents expressed against the declared parameters.
    fn fmt_poly(poly: &FpPoly, levels: &[(Sym, u32)], p: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Mono, u64)> = poly.terms().collect();
        terms.sort_by(|a, b| super::fp::grlex_cmp(b.0, a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (s, e) in m.iter() {
                let k = levels.iter().find(|(x, _)| x == s).map(|(_, k)| *k).unwrap_or(0);
                let den = p.pow(k);
                let g = gcd_u64(*e as u64, den);
                let (en, ed) = (*e as u64 / g, den / g);
                factors.push(match (en, ed) {
                    (1, 1) => s.to_string(),
                    (n, 1) => format!("{s}^{n}"),
                    (n, d) => format!("{s}^({n}/{d})"),
                });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Const(c) => write!(f, "{c}"),
            Repr::Frac(fr) => {
                let levels = fr.levels.to_vec();
                if fr.den.is_one() {
                    Self::fmt_poly(&fr.num, &levels, self.p, f)
                } else {
                    write!(f, "(")?;
                    Self::fmt_poly(&fr.num, &levels, self.p, f)?;
                    write!(f, ")/(")?;
                    Self::fmt_poly(&fr.den, &levels, self.p, f)?;
                    write!(f, ")")
                }
            }
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
