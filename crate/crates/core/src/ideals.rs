//! Gröbner bases over F_p(params): membership, elimination, quotients, zero-dimensional
//! radicals and squarefree parts.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use smallvec::SmallVec;
use thiserror::Error;

use crate::exactalg::{grlex, Coefficient, Exps, MultiPoly, Ring, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("monomial order does not list every variable exactly once")]
    BadOrder,
}

impl IdealError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            IdealError::NotZeroDimensional => "not-zero-dimensional",
            IdealError::BadOrder => "bad-order",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrLex,
    /// Lexicographic with the given variable indices, most significant first.
    Lex(Vec<usize>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GrLex => grlex(a, b),
            MonomialOrder::Lex(pri) => {
                for &i in pri {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Polynomial as a term list sorted ascending under a fixed order (leading term last).
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Exps, Coefficient)>,
}

impl GPoly {
    fn from_poly(f: &MultiPoly, ord: &MonomialOrder) -> GPoly {
        let mut terms: Vec<(Exps, Coefficient)> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        GPoly { terms }
    }

    fn to_poly(&self, ring: &Ring) -> MultiPoly {
        MultiPoly::from_terms(ring, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Exps {
        &self.terms.last().unwrap().0
    }

    fn lc(&self) -> &Coefficient {
        &self.terms.last().unwrap().1
    }

    fn make_monic(&mut self) {
        if self.is_zero() || self.lc().is_one() {
            return;
        }
        let inv = self.lc().inv();
        for t in self.terms.iter_mut() {
            t.1 = t.1.mul(&inv);
        }
    }

    /// `self − c·x^m·other`, merging the sorted term lists.
    fn sub_scaled(&self, other: &GPoly, c: &Coefficient, m: &[u32], ord: &MonomialOrder) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = other.terms.iter().map(|(e, x)| {
            let ee: Exps = e.iter().zip(m.iter()).map(|(a, b)| a + b).collect();
            (ee, x.mul(c).neg())
        });
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match ord.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (e, c1) = a.next().unwrap();
                        let (_, c2) = b.next().unwrap();
                        let s = c1.add(&c2);
                        if !s.is_zero() {
                            out.push((e, s));
                        }
                    }
                },
            }
        }
        GPoly { terms: out }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// Full reduction; among applicable divisors the one with the smallest leading monomial
/// is used.
fn reduce(f: &GPoly, basis: &[GPoly], ord: &MonomialOrder) -> GPoly {
    let mut p = f.clone();
    let mut rem: Vec<(Exps, Coefficient)> = Vec::new();
    while let Some((e, c)) = p.terms.last().cloned() {
        let mut best: Option<&GPoly> = None;
        for g in basis {
            if divides(g.lm(), &e) && best.is_none_or(|b| ord.cmp(g.lm(), b.lm()) == Ordering::Less) {
                best = Some(g);
            }
        }
        match best {
            Some(g) => {
                let m = quotient(&e, g.lm());
                let k = c.div(g.lc());
                p = p.sub_scaled(g, &k, &m, ord);
            }
            None => {
                p.terms.pop();
                rem.push((e, c));
            }
        }
    }
    rem.reverse();
    GPoly { terms: rem }
}

fn spoly(f: &GPoly, g: &GPoly, ord: &MonomialOrder) -> GPoly {
    let l = lcm(f.lm(), g.lm());
    let mf = quotient(&l, f.lm());
    let mg = quotient(&l, g.lm());
    let a = GPoly { terms: Vec::new() }.sub_scaled(f, &f.lc().inv().neg(), &mf, ord);
    a.sub_scaled(g, &g.lc().inv(), &mg, ord)
}

fn is_constant(g: &GPoly) -> bool {
    g.lm().iter().all(|e| *e == 0)
}

fn buchberger(gens: &[MultiPoly], ring: &Ring, ord: &MonomialOrder) -> Vec<GPoly> {
    let n = ring.nvars();
    let mut g: Vec<GPoly> = Vec::new();
    for f in gens {
        if f.is_zero() {
            continue;
        }
        let mut gp = GPoly::from_poly(f, ord);
        gp.make_monic();
        if is_constant(&gp) {
            return vec![GPoly { terms: vec![(SmallVec::from_elem(0, n), Coefficient::one(ring.p()))] }];
        }
        g.push(gp);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        let mut best = 0;
        let mut best_lcm = lcm(g[pairs[0].0].lm(), g[pairs[0].1].lm());
        for (k, (i, j)) in pairs.iter().enumerate().skip(1) {
            let l = lcm(g[*i].lm(), g[*j].lm());
            if ord.cmp(&l, &best_lcm) == Ordering::Less {
                best = k;
                best_lcm = l;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        let (li, lj) = (g[i].lm(), g[j].lm());
        if li.iter().zip(lj.iter()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = spoly(&g[i], &g[j], ord);
        let mut r = reduce(&s, &g, ord);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        if is_constant(&r) {
            return vec![r];
        }
        let k = g.len();
        g.push(r);
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    // minimal basis
    let mut keep: Vec<GPoly> = Vec::new();
    for (i, gi) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, gj)| {
            j != i && divides(gj.lm(), gi.lm()) && (gj.lm() != gi.lm() || j < i)
        });
        if !redundant {
            keep.push(gi.clone());
        }
    }
    // reduced basis
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<GPoly> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
        let mut r = reduce(&keep[i], &others, ord);
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    out
}

#[derive(Debug, Clone)]
struct Basis {
    polys: Vec<MultiPoly>,
    g: Vec<GPoly>,
}

/// An ideal with a monomial order and a lazily computed reduced Gröbner basis.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    ring: Ring,
    gens: Vec<MultiPoly>,
    order: MonomialOrder,
    basis: OnceLock<Basis>,
}

impl IdealHandle {
    pub fn new(ring: &Ring, gens: Vec<MultiPoly>) -> Self {
        Self::with_order(ring, gens, MonomialOrder::GrLex).expect("graded lex is always valid")
    }

    pub fn with_order(ring: &Ring, gens: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self, IdealError> {
        if let MonomialOrder::Lex(pri) = &order {
            let mut seen = pri.clone();
            seen.sort();
            if seen != (0..ring.nvars()).collect::<Vec<_>>() {
                return Err(IdealError::BadOrder);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealHandle { ring: ring.clone(), gens, order, basis: OnceLock::new() })
    }

    pub fn unit(ring: &Ring) -> Self {
        Self::new(ring, vec![ring.one()])
    }

    /// The same ideal under a different order; the cache is rebuilt.
    pub fn reorder(&self, order: MonomialOrder) -> Result<Self, IdealError> {
        Self::with_order(&self.ring, self.gens.clone(), order)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    fn basis(&self) -> &Basis {
        self.basis.get_or_init(|| {
            let g = buchberger(&self.gens, &self.ring, &self.order);
            Basis { polys: g.iter().map(|x| x.to_poly(&self.ring)).collect(), g }
        })
    }

    /// Reduced Gröbner basis under the ideal's order.
    pub fn groebner_basis(&self) -> &[MultiPoly] {
        &self.basis().polys
    }

    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let g = GPoly::from_poly(f, &self.order);
        reduce(&g, &self.basis().g, &self.order).to_poly(&self.ring)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        self.basis().g.first().is_some_and(is_constant)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis().g.is_empty()
    }

    fn leading_monomials(&self) -> Vec<Exps> {
        self.basis().g.iter().map(|g| g.lm().clone()).collect()
    }

    /// Standard monomials of the quotient; `None` when there are infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Exps>> {
        let n = self.ring.nvars();
        let lms = self.leading_monomials();
        let mut bounds = vec![0u32; n];
        for (i, b) in bounds.iter_mut().enumerate() {
            *b = lms
                .iter()
                .filter(|m| m.iter().enumerate().all(|(j, e)| j == i || *e == 0))
                .map(|m| m[i])
                .min()?;
        }
        let mut out = Vec::new();
        let mut cur: Exps = SmallVec::from_elem(0, n);
        if bounds.contains(&0) {
            return Some(out);
        }
        loop {
            if !lms.iter().any(|m| divides(m, &cur)) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Vector-space dimension of the quotient ring; `None` if infinite.
    pub fn standard_monomial_count(&self) -> Option<u64> {
        self.standard_monomials().map(|v| v.len() as u64)
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.standard_monomials().is_some()
    }

    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        IdealHandle::with_order(&self.ring, gens, self.order.clone()).unwrap()
    }

    pub fn product(&self, other: &IdealHandle) -> IdealHandle {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        IdealHandle::with_order(&self.ring, gens, self.order.clone()).unwrap()
    }

    pub fn power(&self, r: u32) -> IdealHandle {
        let mut acc = IdealHandle::unit(&self.ring);
        for _ in 0..r {
            acc = acc.product(self);
        }
        acc
    }

    /// Gröbner-reduced generators under graded lex, used as a canonical presentation.
    pub fn canonical(&self) -> IdealHandle {
        let gl = if self.order == MonomialOrder::GrLex { self.clone() } else { self.reorder(MonomialOrder::GrLex).unwrap() };
        IdealHandle::new(&self.ring, gl.groebner_basis().to_vec())
    }
}

impl PartialEq for IdealHandle {
    /// Equality as ideals.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.contains_ideal(other) && other.contains_ideal(self)
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn groebner_basis(i: &IdealHandle) -> Vec<MultiPoly> {
    i.groebner_basis().to_vec()
}

/// Normal form and membership flag.
pub fn normal_form(f: &MultiPoly, i: &IdealHandle) -> (MultiPoly, bool) {
    let r = i.normal_form(f);
    let member = r.is_zero();
    (r, member)
}

/// `I ∩ k[keep]` via a lex order with the eliminated variables first.
pub fn eliminate(i: &IdealHandle, keep: &[&str]) -> IdealHandle {
    let ring = i.ring();
    let keep_idx: Vec<usize> = keep.iter().map(|v| ring.index_of(v).expect("declared variable")).collect();
    let mut pri: Vec<usize> = (0..ring.nvars()).filter(|k| !keep_idx.contains(k)).collect();
    let elim = pri.clone();
    let mut rest: Vec<usize> = (0..ring.nvars()).filter(|k| keep_idx.contains(k)).collect();
    rest.sort();
    pri.extend(rest);
    let lex = i.reorder(MonomialOrder::Lex(pri)).unwrap();
    let gens: Vec<MultiPoly> =
        lex.groebner_basis().iter().filter(|g| elim.iter().all(|k| !g.involves(*k))).cloned().collect();
    IdealHandle::new(ring, gens)
}

pub(crate) fn fresh_var(ring: &Ring) -> String {
    let mut name = "_t".to_string();
    while ring.index_of(&name).is_some() {
        name.insert(0, '_');
    }
    name
}

/// `I ∩ J` through `t·I + (1 − t)·J`.
pub fn intersect(i: &IdealHandle, j: &IdealHandle) -> IdealHandle {
    let ring = i.ring();
    let t = fresh_var(ring);
    let big = ring.with_var(&t);
    let tv = big.var(&t);
    let one_minus = big.one().sub(&tv);
    let mut gens: Vec<MultiPoly> = i.gens().iter().map(|g| g.embed(&big).mul(&tv)).collect();
    gens.extend(j.gens().iter().map(|g| g.embed(&big).mul(&one_minus)));
    let keep: Vec<&str> = ring.vars().iter().map(|s| s.as_str()).collect();
    let e = eliminate(&IdealHandle::new(&big, gens), &keep);
    IdealHandle::new(ring, e.gens().iter().map(|g| g.contract(ring).expect("t eliminated")).collect())
}

/// `(I : f) = {g : g·f ∈ I}`.
pub fn ideal_quotient(i: &IdealHandle, f: &MultiPoly) -> IdealHandle {
    let ring = i.ring();
    if f.is_zero() {
        return IdealHandle::unit(ring);
    }
    let principal = IdealHandle::new(ring, vec![f.clone()]);
    let cap = intersect(i, &principal);
    IdealHandle::new(ring, cap.gens().iter().map(|g| g.div_exact(f).expect("generator of I ∩ (f) is divisible by f")).collect())
}

pub(crate) fn to_unipoly(f: &MultiPoly, var: usize) -> UniPoly {
    let cs = f.coeffs_in(var).into_iter().map(|c| c.as_constant().expect("univariate polynomial")).collect();
    UniPoly::new(f.p(), cs)
}

pub(crate) fn from_unipoly(u: &UniPoly, ring: &Ring, var: usize) -> MultiPoly {
    let x = MultiPoly::var(ring, var);
    let mut acc = ring.zero();
    for c in u.coeffs().iter().rev() {
        acc = acc.mul(&x).add(&MultiPoly::constant(ring, c.clone()));
    }
    acc
}

/// `√I` for zero-dimensional `I`, by adjoining squarefree parts of univariate eliminants.
pub fn radical_zero_dim(i: &IdealHandle) -> Result<IdealHandle, IdealError> {
    if !i.is_zero_dimensional() {
        return Err(IdealError::NotZeroDimensional);
    }
    let ring = i.ring();
    if i.is_unit() {
        return Ok(IdealHandle::unit(ring));
    }
    let mut gens = i.groebner_basis().to_vec();
    for (k, v) in ring.vars().iter().enumerate() {
        let e = eliminate(i, &[v.as_str()]);
        let g = e.groebner_basis().first().cloned().expect("zero-dimensional ideal has a univariate eliminant");
        let sq = to_unipoly(&g, k).squarefree_part();
        gens.push(from_unipoly(&sq, ring, k));
    }
    Ok(IdealHandle::new(ring, IdealHandle::new(ring, gens).groebner_basis().to_vec()))
}

/// Product of the distinct irreducible factors of `f`, over the perfect closure of the
/// coefficient field.
pub fn squarefree_part(f: &MultiPoly) -> MultiPoly {
    let ring = f.ring();
    if f.as_constant().is_some() {
        return ring.one();
    }
    let partials: Vec<MultiPoly> =
        (0..ring.nvars()).map(|i| f.partial_derivative(i)).filter(|d| !d.is_zero()).collect();
    if partials.is_empty() {
        return squarefree_part(&f.pth_root().expect("all partials vanish only on p-th powers"));
    }
    let mut w = f.clone();
    for d in &partials {
        w = w.gcd(d);
    }
    let u = f.div_exact(&w).expect("gcd divides").monic();
    loop {
        let c = w.gcd(&u);
        if c.as_constant().is_some() {
            break;
        }
        w = w.div_exact(&c).expect("gcd divides");
    }
    if w.as_constant().is_some() {
        u
    } else {
        let root = w.pth_root().expect("remaining cofactor is a p-th power");
        u.mul(&squarefree_part(&root)).monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Ring {
        Ring::new(5, &["x", "y"])
    }

    #[test]
    fn basis_examples() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let i = IdealHandle::new(&r, vec![x.clone(), y.clone()]);
        assert_eq!(i.groebner_basis(), &[y.clone(), x.clone()]);
        let j = IdealHandle::new(&r, vec![x.pow(2).add(&y.pow(2)), x.mul(&y)]);
        assert!(j.contains(&x.pow(3)));
        assert!(!j.contains(&x.pow(2)));
        let unit = IdealHandle::new(&r, vec![r.one()]);
        assert_eq!(unit.groebner_basis(), &[r.one()]);
        assert!(IdealHandle::new(&r, vec![]).groebner_basis().is_empty());
    }

    #[test]
    fn normal_forms() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let i = IdealHandle::new(&r, vec![x.clone()]);
        assert_eq!(normal_form(&x.pow(2), &i), (r.zero(), true));
        assert_eq!(normal_form(&y, &i), (y.clone(), false));
        let m = IdealHandle::new(&r, vec![x.pow(4)]);
        assert!(m.contains(&x.pow(4)));
        assert_eq!(m.normal_form(&x.pow(3)), x.pow(3));
    }

    #[test]
    fn elimination() {
        let r = Ring::new(5, &["x", "y", "tau"]);
        let (x, tau) = (r.var("x"), r.var("tau"));
        let e = eliminate(&IdealHandle::new(&r, vec![tau.sub(&x)]), &["x", "y"]);
        assert!(e.is_zero_ideal());
        let e = eliminate(&IdealHandle::new(&r, vec![tau.pow(2).sub(&x), tau.clone()]), &["x"]);
        assert_eq!(e, IdealHandle::new(&r, vec![x.clone()]));
        let e = eliminate(&IdealHandle::new(&r, vec![x.pow(4)]), &["x", "y"]);
        assert_eq!(e, IdealHandle::new(&r, vec![x.pow(4)]));
    }

    #[test]
    fn quotients() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let q = ideal_quotient(&IdealHandle::new(&r, vec![x.pow(2)]), &x);
        assert_eq!(q, IdealHandle::new(&r, vec![x.clone()]));
        let q = ideal_quotient(&IdealHandle::new(&r, vec![x.mul(&y)]), &x);
        assert_eq!(q, IdealHandle::new(&r, vec![y.clone()]));
        let q = ideal_quotient(&IdealHandle::new(&r, vec![x.pow(2), x.mul(&y)]), &x);
        assert_eq!(q, IdealHandle::new(&r, vec![x.clone(), y.clone()]));
    }

    #[test]
    fn radicals() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let m = IdealHandle::new(&r, vec![x.clone(), y.clone()]);
        assert_eq!(radical_zero_dim(&IdealHandle::new(&r, vec![x.pow(2), y.pow(2)])).unwrap(), m);
        assert_eq!(radical_zero_dim(&IdealHandle::new(&r, vec![x.pow(2), x.mul(&y), y.pow(3)])).unwrap(), m);
        let one = r.one();
        let f = x.sub(&one).pow(2).mul(&x.add(&one));
        let rad = radical_zero_dim(&IdealHandle::new(&r, vec![f, y.clone()])).unwrap();
        assert_eq!(rad, IdealHandle::new(&r, vec![x.sub(&one).mul(&x.add(&one)), y.clone()]));
        assert_eq!(radical_zero_dim(&IdealHandle::new(&r, vec![x.clone()])), Err(IdealError::NotZeroDimensional));
    }

    #[test]
    fn squarefree() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        assert_eq!(squarefree_part(&x.pow(2)), x);
        assert_eq!(squarefree_part(&x.pow(5)), x);
        let f = x.pow(2).mul(&x.add(&r.one()));
        assert_eq!(squarefree_part(&f), x.mul(&x.add(&r.one())).monic());
        let g = y.sub(&x.pow(2)).pow(10).mul(&x);
        assert_eq!(squarefree_part(&g), y.sub(&x.pow(2)).mul(&x).monic());
    }

    fn arb_small() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((1u64..5, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
            let r = Ring::new(5, &["x", "y"]);
            MultiPoly::from_terms(
                &r,
                terms.into_iter().map(|(c, a, b)| (SmallVec::from_slice(&[a, b]), Coefficient::from_u64(5, c))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn buchberger_criterion(a in arb_small(), b in arb_small(), c in arb_small()) {
            let r = a.ring().clone();
            let i = IdealHandle::new(&r, vec![a, b, c]);
            let g: Vec<GPoly> = i.basis().g.clone();
            for x in 0..g.len() {
                for y in 0..x {
                    let s = spoly(&g[x], &g[y], i.order());
                    prop_assert!(reduce(&s, &g, i.order()).is_zero());
                }
            }
        }

        #[test]
        fn quotient_times_f_in_ideal(a in arb_small(), b in arb_small(), f in arb_small()) {
            let r = a.ring().clone();
            let i = IdealHandle::new(&r, vec![a, b]);
            let q = ideal_quotient(&i, &f);
            for g in q.gens() {
                prop_assert!(i.contains(&g.mul(&f)));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn membership_sound(f in arb_small(), g in arb_small(), a in arb_small(), b in arb_small(), h1 in arb_small(), h2 in arb_small()) {
            let r = a.ring().clone();
            let i = IdealHandle::new(&r, vec![a.clone(), b.clone()]);
            let member = a.mul(&h1).add(&b.mul(&h2));
            let fg = f.mul(&g);
            prop_assert_eq!(i.normal_form(&fg.add(&member)), i.normal_form(&fg));
        }

        #[test]
        fn radical_idempotent(a in 1u32..4, b in 2u32..4, c in 0u64..5) {
            let r = Ring::new(5, &["x", "y"]);
            let (x, y) = (r.var("x"), r.var("y"));
            let shift = x.sub(&MultiPoly::constant(&r, Coefficient::from_u64(5, c)));
            let i = IdealHandle::new(&r, vec![x.pow(a as u64).mul(&shift), y.pow(b as u64).add(&x.mul(&y))]);
            let rad = radical_zero_dim(&i).unwrap();
            prop_assert!(rad.contains_ideal(&i));
            prop_assert_eq!(radical_zero_dim(&rad).unwrap(), rad);
        }
    }
}
