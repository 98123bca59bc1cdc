use std::fmt;

use super::coefficient::Coefficient;

/// Dense univariate polynomial over F_p(params), low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    p: u64,
    coeffs: Vec<Coefficient>,
}

impl UniPoly {
    pub fn new(p: u64, mut coeffs: Vec<Coefficient>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        UniPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(c: Coefficient) -> Self {
        let p = c.p();
        Self::new(p, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![Coefficient::zero(p), Coefficient::one(p)])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Coefficient> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Coefficient {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Coefficient::zero(self.p))
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![Coefficient::zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, c: &Coefficient) -> UniPoly {
        Self::new(self.p, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn eval(&self, x: &Coefficient) -> Coefficient {
        let mut acc = Coefficient::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Coefficient::from_u64(self.p, i as u64)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().unwrap().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut q = vec![Coefficient::zero(self.p); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(b));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p-th root of a polynomial in `x^p` (coefficients rooted in the perfect closure).
    pub fn pth_root(&self) -> Option<UniPoly> {
        let p = self.p as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.p, self.coeffs.iter().step_by(p).map(|c| c.pth_root()).collect()))
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UniPoly::constant(Coefficient::one(self.p));
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.pth_root().expect("zero derivative means a p-th power").squarefree_part();
        }
        let mut w = self.gcd(&d);
        let u = self.div_rem(&w).0.monic();
        loop {
            let c = w.gcd(&u);
            if c.degree() == Some(0) {
                break;
            }
            w = w.div_rem(&c).0;
        }
        if w.degree().unwrap_or(0) == 0 {
            u
        } else {
            let root = w.pth_root().expect("remaining cofactor is a p-th power");
            u.mul(&root.squarefree_part()).monic()
        }
    }

    /// Roots in F_p(params): roots of linear factors and F_p-rational roots, with
    /// multiplicities. The second component is the cofactor without such roots.
    pub fn rational_roots(&self) -> (Vec<(Coefficient, u32)>, UniPoly) {
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut candidates: Vec<Coefficient> = Vec::new();
        let sqf = self.squarefree_part();
        if sqf.degree() == Some(1) {
            candidates.push(sqf.coeff(0).neg().div(&sqf.coeff(1)));
        } else {
            for c in 0..self.p {
                let c = Coefficient::from_u64(self.p, c);
                if sqf.eval(&c).is_zero() {
                    candidates.push(c);
                }
            }
        }
        for r in candidates {
            let lin = UniPoly::new(self.p, vec![r.neg(), Coefficient::one(self.p)]);
            let mut m = 0;
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                m += 1;
            }
            out.push((r, m));
        }
        (out, rest)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> Coefficient {
        Coefficient::from_i64(5, v)
    }

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::new(5, cs.iter().map(|v| c(*v)).collect())
    }

    #[test]
    fn squarefree_of_repeated_roots() {
        // (x-1)^2 (x+1) = x^3 - x^2 - x + 1
        let f = poly(&[1, -1, -1, 1]);
        assert_eq!(f.squarefree_part(), poly(&[-1, 0, 1]));
        let x5 = poly(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(x5.squarefree_part(), poly(&[0, 1]));
    }

    #[test]
    fn squarefree_inseparable_parameter() {
        let rho = Coefficient::param(5, "rho");
        // x^5 - rho is (x - rho^(1/5))^5
        let mut cs = vec![rho.neg()];
        cs.extend((0..4).map(|_| c(0)));
        cs.push(c(1));
        let f = UniPoly::new(5, cs);
        let s = f.squarefree_part();
        assert_eq!(s.degree(), Some(1));
        assert_eq!(s.coeff(0).neg().pow(5), rho);
    }

    #[test]
    fn roots_with_multiplicity() {
        let f = poly(&[1, -1, -1, 1]);
        let (roots, rest) = f.rational_roots();
        assert_eq!(roots, vec![(c(1), 2), (c(4), 1)]);
        assert_eq!(rest.degree(), Some(0));
    }
}
