use std::collections::HashMap;
use std::fmt;

use super::coefficient::Coefficient;
use super::multipoly::MultiPoly;
use super::unipoly::UniPoly;
use super::ExactAlgError;

/// A truncated Laurent series `Σ_{e ≥ v} c_e u^e + O(u^prec)`.
///
/// Coefficients are stored densely from `start` up to `prec`; `coeffs[0]` is nonzero
/// unless the germ is zero to its precision, in which case `start == prec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentGerm {
    p: u64,
    start: i64,
    coeffs: Vec<Coefficient>,
    prec: i64,
}

impl LaurentGerm {
    /// Builds a germ from dense coefficients starting at `start`; entries at or beyond
    /// `prec` are dropped and missing ones below `prec` are zero.
    pub fn new(p: u64, start: i64, mut coeffs: Vec<Coefficient>, prec: i64) -> Self {
        let len = (prec - start).max(0) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, Coefficient::zero(p));
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentGerm { p, start: prec, coeffs: Vec::new(), prec },
            Some(0) => LaurentGerm { p, start, coeffs, prec },
            Some(k) => LaurentGerm { p, start: start + k as i64, coeffs: coeffs.split_off(k), prec },
        }
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        LaurentGerm { p, start: prec, coeffs: Vec::new(), prec }
    }

    pub fn monomial(c: Coefficient, e: i64, prec: i64) -> Self {
        let p = c.p();
        Self::new(p, e, vec![c], prec)
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::monomial(Coefficient::one(p), 0, prec)
    }

    /// The uniformizer `u` known modulo `u^prec`.
    pub fn uniformizer(p: u64, prec: i64) -> Self {
        Self::monomial(Coefficient::one(p), 1, prec)
    }

    pub fn from_terms(p: u64, terms: &[(i64, Coefficient)], prec: i64) -> Self {
        let lo = terms.iter().map(|(e, _)| *e).min().unwrap_or(prec).min(prec);
        let mut coeffs = vec![Coefficient::zero(p); (prec - lo).max(0) as usize];
        for (e, c) in terms {
            if *e < prec {
                let i = (e - lo) as usize;
                coeffs[i] = coeffs[i].add(c);
            }
        }
        Self::new(p, lo, coeffs, prec)
    }

    pub fn from_unipoly(f: &UniPoly, prec: i64) -> Self {
        Self::new(f.p(), 0, f.coeffs().to_vec(), prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Certified valuation.
    pub fn valuation(&self) -> Result<i64, ExactAlgError> {
        if self.is_zero() {
            Err(ExactAlgError::PrecisionExhausted)
        } else {
            Ok(self.start)
        }
    }

    /// Lower bound on the valuation (the precision for a germ that is zero so far).
    pub fn valuation_bound(&self) -> i64 {
        self.start
    }

    pub fn leading_coefficient(&self) -> Option<&Coefficient> {
        self.coeffs.first()
    }

    /// Coefficient of `u^e`; `None` when `e ≥ prec`.
    pub fn coeff(&self, e: i64) -> Option<Coefficient> {
        if e >= self.prec {
            return None;
        }
        if e < self.start {
            return Some(Coefficient::zero(self.p));
        }
        Some(self.coeffs[(e - self.start) as usize].clone())
    }

    /// Nonzero known terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coefficient)> {
        let s = self.start;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (s + i as i64, c))
    }

    /// The terms of negative exponent; needs the germ known through `u^{-1}`.
    pub fn polar_part(&self) -> Result<Vec<(i64, Coefficient)>, ExactAlgError> {
        if self.prec < 0 {
            return Err(ExactAlgError::PrecisionExhausted);
        }
        Ok(self.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())).collect())
    }

    /// Largest perfection level among coefficients.
    pub fn max_level(&self) -> u32 {
        self.coeffs.iter().map(|c| c.max_level()).max().unwrap_or(0)
    }

    pub fn truncate(&self, prec: i64) -> LaurentGerm {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.p, self.start, self.coeffs.clone(), prec)
    }

    /// Treats the known part as exact and pads it with zeros up to `prec`.
    pub fn extend_precision(&self, prec: i64) -> LaurentGerm {
        if prec <= self.prec {
            return self.truncate(prec);
        }
        if self.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::new(self.p, self.start, self.coeffs.clone(), prec)
    }

    pub fn neg(&self) -> LaurentGerm {
        LaurentGerm {
            p: self.p,
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &LaurentGerm) -> LaurentGerm {
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let mut coeffs = vec![Coefficient::zero(self.p); (prec - start) as usize];
        for g in [self, o] {
            for (i, c) in g.coeffs.iter().enumerate() {
                let e = g.start + i as i64;
                if e >= prec {
                    break;
                }
                let k = (e - start) as usize;
                coeffs[k] = coeffs[k].add(c);
            }
        }
        Self::new(self.p, start, coeffs, prec)
    }

    pub fn sub(&self, o: &LaurentGerm) -> LaurentGerm {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coefficient) -> LaurentGerm {
        if c.is_zero() {
            return Self::zero(self.p, self.prec);
        }
        LaurentGerm { p: self.p, start: self.start, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(), prec: self.prec }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> LaurentGerm {
        LaurentGerm { p: self.p, start: self.start + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul(&self, o: &LaurentGerm) -> LaurentGerm {
        let prec = (self.prec + o.start).min(o.prec + self.start);
        let start = self.start + o.start;
        if self.is_zero() || o.is_zero() || prec <= start {
            return Self::zero(self.p, prec);
        }
        let n = (prec - start) as usize;
        let mut coeffs = vec![Coefficient::zero(self.p); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.p, start, coeffs, prec)
    }

    /// Inverse to the relative precision of `self`.
    pub fn invert(&self) -> Result<LaurentGerm, ExactAlgError> {
        if self.is_zero() {
            return Err(ExactAlgError::ZeroGerm);
        }
        let n = self.coeffs.len();
        let a0inv = self.coeffs[0].inv();
        let mut b: Vec<Coefficient> = Vec::with_capacity(n);
        b.push(a0inv.clone());
        for k in 1..n {
            let mut s = Coefficient::zero(self.p);
            for i in 1..=k {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    s = s.add(&a.mul(&b[k - i]));
                }
            }
            b.push(s.mul(&a0inv).neg());
        }
        Ok(Self::new(self.p, -self.start, b, -self.start + n as i64))
    }

    pub fn div(&self, o: &LaurentGerm) -> Result<LaurentGerm, ExactAlgError> {
        Ok(self.mul(&o.invert()?))
    }

    pub fn pow(&self, mut e: u64) -> LaurentGerm {
        let mut base = self.clone();
        let mut acc: Option<LaurentGerm> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| Self::one(self.p, self.prec.max(0)))
    }
}

/// Evaluates `f` at germs assigned positionally to its ring variables.
pub fn substitute(f: &MultiPoly, assignment: &[LaurentGerm]) -> Result<LaurentGerm, ExactAlgError> {
    let ring = f.ring();
    if assignment.len() != ring.nvars() {
        let missing = ring.vars().get(assignment.len()).cloned().unwrap_or_default();
        return Err(ExactAlgError::UnassignedVariable(missing));
    }
    let p = f.p();
    let cap = assignment.iter().map(|g| g.precision()).min().unwrap_or(0);
    let mut powers: HashMap<(usize, u32), LaurentGerm> = HashMap::new();
    let mut acc: Option<LaurentGerm> = None;
    for (e, c) in f.terms() {
        let mut t: Option<LaurentGerm> = None;
        for (i, k) in e.iter().enumerate() {
            if *k == 0 {
                continue;
            }
            let pw = powers.entry((i, *k)).or_insert_with(|| assignment[i].pow(*k as u64)).clone();
            t = Some(match t {
                None => pw,
                Some(t) => t.mul(&pw),
            });
        }
        let t = match t {
            None => LaurentGerm::monomial(c.clone(), 0, cap),
            Some(t) => t.scale(c),
        };
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.unwrap_or_else(|| LaurentGerm::zero(p, cap)))
}

/// Named variant of [`substitute`].
pub fn substitute_named(f: &MultiPoly, assignment: &[(&str, LaurentGerm)]) -> Result<LaurentGerm, ExactAlgError> {
    let mut ordered = Vec::new();
    for v in f.ring().vars() {
        let g = assignment
            .iter()
            .find(|(n, _)| *n == v.as_str())
            .map(|(_, g)| g.clone())
            .ok_or_else(|| ExactAlgError::UnassignedVariable(v.clone()))?;
        ordered.push(g);
    }
    substitute(f, &ordered)
}

impl fmt::Display for LaurentGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.as_const().is_some() { c.to_string() } else { format!("({c})") };
            match e {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*u")?,
                e => write!(f, "{cs}*u^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.prec)
    }
}

impl fmt::Debug for LaurentGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
