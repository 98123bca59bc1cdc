//! Sparse polynomials over a prime field with named variables.
//!
//! This is the workhorse underneath [`Coefficient`](super::Coefficient): numerators and
//! denominators of rational functions in the transcendentals live here, and multivariate
//! gcds are computed here by a recursive primitive remainder sequence.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

pub type Sym = Arc<str>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime. Panics on zero, which is always a logic error upstream.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    pow_mod(a, p - 2, p)
}

pub fn from_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// A monomial: sorted (variable, exponent) pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(SmallVec<[(Sym, u32); 3]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(sym: Sym, e: u32) -> Self {
        let mut m = Mono::one();
        if e > 0 {
            m.0.push((sym, e));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, u32)>) -> Self {
        let mut map: BTreeMap<Sym, u32> = BTreeMap::new();
        for (s, e) in pairs {
            *map.entry(s).or_insert(0) += e;
        }
        Mono(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn exp(&self, sym: &str) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| &**s == sym)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Sym, u32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = SmallVec::new();
        let mut j = 0;
        let b = &other.0;
        for (s, e) in self.0.iter() {
            let mut e = *e;
            if j < b.len() && b[j].0 < *s {
                return None;
            }
            if j < b.len() && b[j].0 == *s {
                if b[j].1 > e {
                    return None;
                }
                e -= b[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((s.clone(), e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Mono(out))
    }

    /// Removes `sym`, returning the remaining monomial and the removed exponent.
    pub fn split_off(&self, sym: &str) -> (Mono, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(s, x)| {
                if &**s == sym {
                    e = *x;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Mono(rest), e)
    }

    fn map_exp(&self, sym: &str, f: impl Fn(u32) -> u32) -> Mono {
        Mono(
            self.0
                .iter()
                .map(|(s, e)| if &**s == sym { (s.clone(), f(*e)) } else { (s.clone(), *e) })
                .filter(|(_, e)| *e > 0)
                .collect(),
        )
    }
}

/// Graded lexicographic comparison; variables earlier in name order are more significant.
pub fn grlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => lex_cmp(a, b),
        o => o,
    }
}

fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let (a, b) = (&a.0, &b.0);
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: u64,
    terms: BTreeMap<Mono, u64>,
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, terms: BTreeMap::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::monomial(p, Mono::one(), c)
    }

    pub fn var(p: u64, sym: Sym) -> Self {
        Self::monomial(p, Mono::var(sym, 1), 1)
    }

    pub fn monomial(p: u64, m: Mono, c: u64) -> Self {
        let mut terms = BTreeMap::new();
        if c % p != 0 {
            terms.insert(m, c % p);
        }
        FpPoly { p, terms }
    }

    pub fn from_terms(p: u64, it: impl IntoIterator<Item = (Mono, u64)>) -> Self {
        let mut out = FpPoly::zero(p);
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.const_value() == Some(1)
    }

    pub fn const_value(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Mono::one()).copied(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, u64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = add_mod(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> FpPoly {
        FpPoly {
            p: self.p,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.p - c)).collect(),
        }
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), self.p - c);
        }
        out
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if let Some(c) = other.const_value() {
            return self.scale(c);
        }
        if let Some(c) = self.const_value() {
            return other.scale(c);
        }
        let mut out = FpPoly::zero(self.p);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), mul_mod(*ca, *cb, self.p));
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return FpPoly::zero(self.p);
        }
        FpPoly {
            p: self.p,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), mul_mod(*x, c, self.p))).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: u64) -> FpPoly {
        let mut out = FpPoly::zero(self.p);
        for (mm, x) in self.terms.iter() {
            out.add_term(mm.mul(m), mul_mod(*x, c, self.p));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FpPoly {
        let mut base = self.clone();
        let mut acc = FpPoly::constant(self.p, 1);
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

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Mono, u64)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex_cmp(a.0, b.0))
            .map(|(m, c)| (m, *c))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, sym: &str) -> u32 {
        self.terms.keys().map(|m| m.exp(sym)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| s.clone())).collect()
    }

    pub fn involves(&self, sym: &str) -> bool {
        self.terms.keys().any(|m| m.exp(sym) > 0)
    }

    /// Makes the graded-lex leading coefficient 1; returns the old leading coefficient.
    pub fn monic(&self) -> (FpPoly, u64) {
        match self.leading() {
            None => (self.clone(), 1),
            Some((_, c)) => (self.scale(inv_mod(c, self.p)), c),
        }
    }

    /// Coefficients as a polynomial in `sym`, indexed by degree.
    pub fn coeffs_in(&self, sym: &str) -> Vec<FpPoly> {
        let d = self.degree_in(sym) as usize;
        let mut out = vec![FpPoly::zero(self.p); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in self.terms.iter() {
            let (rest, e) = m.split_off(sym);
            out[e as usize].add_term(rest, *c);
        }
        out
    }

    pub fn from_coeffs_in(p: u64, sym: &Sym, coeffs: &[FpPoly]) -> FpPoly {
        let mut out = FpPoly::zero(p);
        for (e, c) in coeffs.iter().enumerate() {
            let xm = Mono::var(sym.clone(), e as u32);
            for (m, x) in c.terms.iter() {
                out.add_term(m.mul(&xm), *x);
            }
        }
        out
    }

    /// Substitutes a constant for `sym`.
    pub fn eval_var(&self, sym: &str, v: u64) -> FpPoly {
        let mut out = FpPoly::zero(self.p);
        for (m, c) in self.terms.iter() {
            let (rest, e) = m.split_off(sym);
            out.add_term(rest, mul_mod(*c, pow_mod(v, e as u64, self.p), self.p));
        }
        out
    }

    pub fn scale_exponents(&self, sym: &str, factor: u32) -> FpPoly {
        if factor == 1 {
            return self.clone();
        }
        FpPoly {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.map_exp(sym, |e| e * factor), *c))
                .collect(),
        }
    }

    pub fn exponents_divisible(&self, sym: &str, d: u32) -> bool {
        self.terms.keys().all(|m| m.exp(sym) % d == 0)
    }

    pub fn divide_exponents(&self, sym: &str, d: u32) -> Option<FpPoly> {
        if !self.exponents_divisible(sym, d) {
            return None;
        }
        Some(FpPoly {
            p: self.p,
            terms: self.terms.iter().map(|(m, c)| (m.map_exp(sym, |e| e / d), *c)).collect(),
        })
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &FpPoly) -> Option<FpPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.const_value() {
            return Some(self.scale(inv_mod(c, self.p)));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c)).unwrap();
        let lc_inv = inv_mod(lc, self.p);
        let mut r = self.clone();
        let mut q = FpPoly::zero(self.p);
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c)) {
            let t = m.div(&lm)?;
            let qc = mul_mod(c, lc_inv, self.p);
            q.add_term(t.clone(), qc);
            r = r.sub(&d.mul_mono(&t, qc));
        }
        Some(q)
    }

    /// Monic gcd (graded-lex leading coefficient 1). `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() {
            return other.monic().0;
        }
        if other.is_zero() {
            return self.monic().0;
        }
        if self.const_value().is_some() || other.const_value().is_some() {
            return FpPoly::constant(self.p, 1);
        }
        if self == other {
            return self.monic().0;
        }
        let va = self.vars();
        let vb = other.vars();
        let v = va.union(&vb).next().cloned().unwrap();
        let a_has = va.contains(&v);
        let b_has = vb.contains(&v);
        if !a_has {
            return self.gcd(&other.content_in(&v));
        }
        if !b_has {
            return self.content_in(&v).gcd(other);
        }
        let ca = self.content_in(&v);
        let cb = other.content_in(&v);
        let c = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let g = primitive_prs(&v, pa, pb);
        c.mul(&g).monic().0
    }

    /// Gcd of the coefficients with respect to `sym`.
    pub fn content_in(&self, sym: &Sym) -> FpPoly {
        let mut g = FpPoly::zero(self.p);
        for c in self.coeffs_in(sym) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn derivative(&self, sym: &str) -> FpPoly {
        let mut out = FpPoly::zero(self.p);
        for (m, c) in self.terms.iter() {
            let e = m.exp(sym);
            if e == 0 {
                continue;
            }
            let k = (e as u64) % self.p;
            if k == 0 {
                continue;
            }
            out.add_term(m.map_exp(sym, |x| x - 1), mul_mod(*c, k, self.p));
        }
        out
    }
}

/// Gcd of two primitive polynomials in `v` by a primitive pseudo-remainder sequence.
fn primitive_prs(v: &Sym, a: FpPoly, b: FpPoly) -> FpPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            let c = a.content_in(v);
            return a.div_exact(&c).expect("content divides");
        }
        if b.degree_in(v) == 0 {
            return FpPoly::constant(a.p, 1);
        }
        let r = pseudo_rem(v, &a, &b);
        let r = if r.is_zero() {
            r
        } else {
            let c = r.content_in(v);
            r.div_exact(&c).expect("content divides")
        };
        a = b;
        b = r;
    }
}

fn pseudo_rem(v: &Sym, a: &FpPoly, b: &FpPoly) -> FpPoly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let shift = Mono::var(v.clone(), dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_mono(&shift, 1));
    }
    r
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in self.0.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (m.is_one(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, c) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}
