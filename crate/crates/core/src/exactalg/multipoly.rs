use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::coefficient::Coefficient;
use super::fp::{FpPoly, Mono, Sym};
use super::ExactAlgError;

pub type Exps = SmallVec<[u32; 4]>;

/// A polynomial ring F_p(params)[vars] with named variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring(Arc<RingData>);

#[derive(PartialEq, Eq, Hash, Debug)]
struct RingData {
    p: u64,
    vars: Vec<String>,
}

impl Ring {
    pub fn new(p: u64, vars: &[&str]) -> Ring {
        Ring(Arc::new(RingData { p, vars: vars.iter().map(|s| s.to_string()).collect() }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// The ring with one more variable appended.
    pub fn with_var(&self, name: &str) -> Ring {
        let mut vars = self.0.vars.clone();
        vars.push(name.to_string());
        Ring(Arc::new(RingData { p: self.0.p, vars }))
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self)
    }

    pub fn one(&self) -> MultiPoly {
        MultiPoly::constant(self, Coefficient::one(self.p()))
    }

    pub fn var(&self, name: &str) -> MultiPoly {
        let i = self.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        MultiPoly::var(self, i)
    }

    pub fn int(&self, c: i64) -> MultiPoly {
        MultiPoly::constant(self, Coefficient::from_i64(self.p(), c))
    }

    pub fn param(&self, name: &str) -> MultiPoly {
        MultiPoly::constant(self, Coefficient::param(self.p(), name))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Exps, Coefficient>,
}

pub fn exps_degree(e: &[u32]) -> u64 {
    e.iter().map(|x| *x as u64).sum()
}

/// Graded lex on exponent vectors; variable 0 most significant.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    exps_degree(a).cmp(&exps_degree(b)).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Coefficient) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(SmallVec::from_elem(0, ring.nvars()), c);
        out
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut e: Exps = SmallVec::from_elem(0, ring.nvars());
        e[i] = 1;
        Self::monomial(ring, e, Coefficient::one(ring.p()))
    }

    pub fn monomial(ring: &Ring, e: Exps, c: Coefficient) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(e, c);
        out
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Exps, Coefficient)>) -> Self {
        let mut out = Self::zero(ring);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Coefficient {
        self.terms.get(e).cloned().unwrap_or_else(|| Coefficient::zero(self.p()))
    }

    pub fn add_term(&mut self, e: Exps, c: Coefficient) {
        debug_assert_eq!(e.len(), self.ring.nvars());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `Some(c)` if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero(self.p())),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|x| *x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coeff(&SmallVec::<[u32; 4]>::from_elem(0, self.ring.nvars()))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let e: Exps = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect() }
    }

    pub fn mul_term(&self, e: &[u32], c: &Coefficient) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (ea, x) in self.terms.iter() {
            let ee: Exps = ea.iter().zip(e.iter()).map(|(a, b)| a + b).collect();
            out.add_term(ee, x.mul(c));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = self.ring.one();
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

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| exps_degree(e)).max().unwrap_or(0)
    }

    /// Lowest total degree of a term (the order at the origin); 0 for the zero polynomial.
    pub fn order(&self) -> u64 {
        self.terms.keys().map(|e| exps_degree(e)).min().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Exps, &Coefficient)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Scales so that the graded-lex leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    pub fn homogeneous_part(&self, d: u64) -> MultiPoly {
        MultiPoly::from_terms(
            &self.ring,
            self.terms.iter().filter(|(e, _)| exps_degree(e) == d).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn truncate_below(&self, n: u64) -> MultiPoly {
        MultiPoly::from_terms(
            &self.ring,
            self.terms.iter().filter(|(e, _)| exps_degree(e) < n).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        let p = self.p();
        let mut out = MultiPoly::zero(&self.ring);
        for (e, c) in self.terms.iter() {
            if e[i] == 0 || (e[i] as u64) % p == 0 {
                continue;
            }
            let mut ee = e.clone();
            ee[i] -= 1;
            out.add_term(ee, c.mul(&Coefficient::from_u64(p, e[i] as u64)));
        }
        out
    }

    pub fn derivative(&self, name: &str) -> MultiPoly {
        self.partial_derivative(self.ring.index_of(name).expect("declared variable"))
    }

    pub fn evaluate(&self, point: &[Coefficient]) -> Coefficient {
        let mut acc = Coefficient::zero(self.p());
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e.iter()) {
                if *k > 0 {
                    t = t.mul(&x.pow(*k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`; the images share a ring (possibly a different one).
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images.first().map(|m| m.ring.clone()).unwrap_or_else(|| self.ring.clone());
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|m| vec![target.one(), m.clone()]).collect();
        let mut acc = MultiPoly::zero(&target);
        for (e, c) in self.terms.iter() {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, k) in e.iter().enumerate() {
                let k = *k as usize;
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][k]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `f(x + a)`: moves `point` to the origin.
    pub fn translate(&self, point: &[Coefficient]) -> MultiPoly {
        if point.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let images: Vec<MultiPoly> = (0..self.ring.nvars())
            .map(|i| MultiPoly::var(&self.ring, i).add(&MultiPoly::constant(&self.ring, point[i].clone())))
            .collect();
        self.compose(&images)
    }

    /// `f(x − a)`: moves the origin back to `point`.
    pub fn untranslate(&self, point: &[Coefficient]) -> MultiPoly {
        let neg: Vec<Coefficient> = point.iter().map(|c| c.neg()).collect();
        self.translate(&neg)
    }

    /// Sets variable `i` to a constant.
    pub fn specialize_var(&self, i: usize, v: &Coefficient) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (e, c) in self.terms.iter() {
            let mut ee = e.clone();
            let k = ee[i];
            ee[i] = 0;
            out.add_term(ee, c.mul(&v.pow(k as u64)));
        }
        out
    }

    /// Specializes a transcendental inside every coefficient.
    pub fn specialize_param(&self, name: &str, v: &Coefficient) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero(&self.ring);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), c.specialize(name, v)?);
        }
        Some(out)
    }

    /// Coefficients with respect to variable `i`, indexed by degree.
    pub fn coeffs_in(&self, i: usize) -> Vec<MultiPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(i) as usize;
        let mut out = vec![MultiPoly::zero(&self.ring); d + 1];
        for (e, c) in self.terms.iter() {
            let mut ee = e.clone();
            let k = ee[i] as usize;
            ee[i] = 0;
            out[k].add_term(ee, c.clone());
        }
        out
    }

    /// Re-expresses the polynomial in `ring`, matching variables by name.
    pub fn embed(&self, ring: &Ring) -> MultiPoly {
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| ring.index_of(v).unwrap_or_else(|| panic!("variable {v} missing in target ring")))
            .collect();
        let mut out = MultiPoly::zero(ring);
        for (e, c) in self.terms.iter() {
            let mut ee: Exps = SmallVec::from_elem(0, ring.nvars());
            for (i, k) in e.iter().enumerate() {
                ee[map[i]] += k;
            }
            out.add_term(ee, c.clone());
        }
        out
    }

    /// Inverse of [`embed`](Self::embed); `None` if a dropped variable occurs.
    pub fn contract(&self, ring: &Ring) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero(ring);
        for (e, c) in self.terms.iter() {
            let mut ee: Exps = SmallVec::from_elem(0, ring.nvars());
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                let j = ring.index_of(&self.ring.vars()[i])?;
                ee[j] = *k;
            }
            out.add_term(ee, c.clone());
        }
        Some(out)
    }

    /// Multivariate division by a single polynomial under graded lex.
    pub fn div_rem(&self, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (le, lc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv();
        let mut q = MultiPoly::zero(&self.ring);
        let mut r = MultiPoly::zero(&self.ring);
        let mut work = self.clone();
        while let Some((e, c)) = work.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(le.iter()).all(|(a, b)| a >= b) {
                let t: Exps = e.iter().zip(le.iter()).map(|(a, b)| a - b).collect();
                let qc = c.mul(&lc_inv);
                q.add_term(t.clone(), qc.clone());
                work = work.sub(&d.mul_term(&t, &qc));
            } else {
                work.terms.remove(&e);
                r.add_term(e, c);
            }
        }
        (q, r)
    }

    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly, ExactAlgError> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ExactAlgError::NotDivisible)
        }
    }

    /// Monic gcd over F_p(params), computed by clearing denominators.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return self.ring.one();
        }
        let (flat, levels) = flatten(&[self, other]);
        let g = flat[0].gcd(&flat[1]);
        unflatten(&self.ring, &g, &levels).monic()
    }

    /// p-th root, when every exponent is divisible by p.
    pub fn pth_root(&self) -> Option<MultiPoly> {
        let p = self.p() as u32;
        let mut out = MultiPoly::zero(&self.ring);
        for (e, c) in self.terms.iter() {
            if e.iter().any(|k| k % p != 0) {
                return None;
            }
            out.add_term(e.iter().map(|k| k / p).collect(), c.pth_root());
        }
        Some(out)
    }

    /// True when every coefficient is in F_p.
    pub fn is_over_prime_field(&self) -> bool {
        self.terms.values().all(|c| c.as_const().is_some())
    }

    /// Largest perfection level among coefficients.
    pub fn max_level(&self) -> u32 {
        self.terms.values().map(|c| c.max_level()).max().unwrap_or(0)
    }
}

/// Clears denominators and aligns perfection levels so that a family of polynomials
/// becomes a family of F_p-polynomials in (ring variables ∪ transcendentals). Ring
/// variable names are prefixed to keep them apart from parameter names.
pub(crate) fn flatten(polys: &[&MultiPoly]) -> (Vec<FpPoly>, Vec<(Sym, u32)>) {
    let p = polys[0].p();
    let mut levels: BTreeMap<Sym, u32> = BTreeMap::new();
    for f in polys {
        for c in f.terms.values() {
            for (s, k) in c.levels() {
                let e = levels.entry(s).or_insert(0);
                *e = (*e).max(k);
            }
        }
    }
    let lift = |poly: FpPoly, own: &[(Sym, u32)]| -> FpPoly {
        let mut poly = poly;
        for (s, t) in levels.iter() {
            let k = own.iter().find(|(x, _)| x == s).map(|(_, k)| *k).unwrap_or(0);
            if k < *t {
                poly = poly.scale_exponents(s, (p as u32).pow(t - k));
            }
        }
        poly
    };
    let mut out = Vec::new();
    for f in polys {
        let vars: Vec<Sym> = f.ring.vars().iter().map(|v| Sym::from(format!("\u{1}{v}"))).collect();
        let mut den = FpPoly::constant(p, 1);
        let mut lifted = Vec::new();
        for (e, c) in f.terms.iter() {
            let lv = c.levels();
            let n = lift(c.numerator(), &lv);
            let d = lift(c.denominator(), &lv);
            let g = den.gcd(&d);
            den = den.mul(&d.div_exact(&g).unwrap());
            lifted.push((e, n, d));
        }
        let mut acc = FpPoly::zero(p);
        for (e, n, d) in lifted {
            let m = Mono::from_pairs(vars.iter().cloned().zip(e.iter().cloned()));
            let factor = den.div_exact(&d).unwrap();
            acc = acc.add(&n.mul(&factor).mul_mono(&m, 1));
        }
        out.push(acc);
    }
    (out, levels.into_iter().collect())
}

pub(crate) fn unflatten(ring: &Ring, poly: &FpPoly, levels: &[(Sym, u32)]) -> MultiPoly {
    let p = ring.p();
    let mut groups: BTreeMap<Exps, FpPoly> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let mut e: Exps = SmallVec::from_elem(0, ring.nvars());
        let mut rest = Vec::new();
        for (s, k) in m.iter() {
            if let Some(name) = s.strip_prefix('\u{1}') {
                e[ring.index_of(name).expect("flattened variable")] = *k;
            } else {
                rest.push((s.clone(), *k));
            }
        }
        groups.entry(e).or_insert_with(|| FpPoly::zero(p)).add_term(Mono::from_pairs(rest), c);
    }
    MultiPoly::from_terms(
        ring,
        groups.into_iter().map(|(e, c)| (e, Coefficient::from_parts(c, FpPoly::constant(p, 1), levels))),
    )
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mut mono = Vec::new();
            for (v, k) in self.ring.vars().iter().zip(e.iter()) {
                match k {
                    0 => {}
                    1 => mono.push(v.clone()),
                    k => mono.push(format!("{v}^{k}")),
                }
            }
            let cs = c.to_string();
            let coeff_simple = c.as_const().is_some();
            let body = match (mono.is_empty(), c.is_one()) {
                (true, _) if coeff_simple => cs,
                (true, _) => format!("({cs})"),
                (false, true) => mono.join("*"),
                (false, false) if coeff_simple => format!("{cs}*{}", mono.join("*")),
                (false, false) => format!("({cs})*{}", mono.join("*")),
            };
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
