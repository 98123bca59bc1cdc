//! Exact arithmetic: F_p, the perfect closure of F_p(params), multivariate polynomials
//! and truncated Laurent series.

mod coefficient;
pub mod fp;
pub(crate) mod multipoly;
mod series;
mod unipoly;

use thiserror::Error;

pub use coefficient::Coefficient;
pub use multipoly::{exps_degree, grlex, Exps, MultiPoly, Ring};
pub use series::{substitute, substitute_named, LaurentGerm};
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("germ is zero to its precision")]
    ZeroGerm,
    #[error("precision exhausted: valuation cannot be certified")]
    PrecisionExhausted,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("variable {0} has no assigned germ")]
    UnassignedVariable(String),
}

impl ExactAlgError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ExactAlgError::ZeroGerm => "zero-germ",
            ExactAlgError::PrecisionExhausted => "precision-exhausted",
            ExactAlgError::NotDivisible => "not-divisible",
            ExactAlgError::UnassignedVariable(_) => "unassigned-variable",
        }
    }
}

/// A rational function `num/den` on a chart.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.as_constant().is_some() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.inv();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn poly(f: MultiPoly) -> Self {
        let one = f.ring().one();
        RatFun { num: f, den: one }
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Numerators of the partial derivatives: `∂(n/d) = (n' d − n d') / d²`.
    pub fn derivative_numerator(&self, i: usize) -> MultiPoly {
        self.num.partial_derivative(i).mul(&self.den).sub(&self.num.mul(&self.den.partial_derivative(i)))
    }

    pub fn evaluate(&self, pt: &[Coefficient]) -> Option<Coefficient> {
        let d = self.den.evaluate(pt);
        (!d.is_zero()).then(|| self.num.evaluate(pt).div(&d))
    }

    pub fn compose(&self, images: &[MultiPoly]) -> RatFun {
        RatFun::new(self.num.compose(images), self.den.compose(images))
    }

    /// `self(images)` for rational images; the images may live on another ring.
    pub fn compose_rational(&self, images: &[RatFun]) -> RatFun {
        let target = images[0].ring();
        let clear = |f: &MultiPoly| -> RatFun {
            let tops: Vec<u32> = (0..images.len()).map(|i| f.degree_in(i)).collect();
            let mut num = target.zero();
            for (e, c) in f.terms() {
                let mut t = MultiPoly::constant(target, c.clone());
                for (i, img) in images.iter().enumerate() {
                    t = t.mul(&img.num.pow(e[i] as u64)).mul(&img.den.pow((tops[i] - e[i]) as u64));
                }
                num = num.add(&t);
            }
            let den = images.iter().zip(&tops).fold(target.one(), |acc, (img, &k)| acc.mul(&img.den.pow(k as u64)));
            RatFun::new(num, den)
        };
        clear(&self.num).div(&clear(&self.den))
    }
}

impl std::fmt::Display for RatFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
