//! The depth-bound machinery: `ep` of ideals, fixed-point ideals of automorphisms,
//! codifferent invariants `r` and `s` of hypersurface presentations, and the composed
//! bounds.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::blowup::ChartAutomorphism;
use crate::exactalg::{Coefficient, MultiPoly, Ring};
use crate::ideals::{eliminate, fresh_var, radical_zero_dim, squarefree_part, IdealHandle};
use crate::localgeom::PlanarPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("ep needs a principal, monomial or zero-dimensional ideal; supply a radical instead")]
    UnsupportedIdealShape,
    #[error("the ideal is not contained in the claimed radical")]
    NotContaining,
    #[error("generator {0} of the claimed radical is not in the radical of the ideal")]
    NotInRadical(String),
    #[error("the presentation is not monic in {0}")]
    NotMonic(String),
    #[error("no power of the divisor up to {0} annihilates the codifferent quotient")]
    AnnihilatorCapExceeded(u64),
    #[error("i_x must be 1 or 2, got {0}")]
    InvalidIx(u64),
    #[error("invalid bound input: {0}")]
    InvalidInput(String),
}

impl BoundsError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            BoundsError::UnsupportedIdealShape => "unsupported-ideal-shape",
            BoundsError::NotContaining => "not-containing",
            BoundsError::NotInRadical(_) => "not-in-radical",
            BoundsError::NotMonic(_) => "not-monic",
            BoundsError::AnnihilatorCapExceeded(_) => "annihilator-cap-exceeded",
            BoundsError::InvalidIx(_) => "invalid-ix",
            BoundsError::InvalidInput(_) => "invalid-input",
        }
    }
}

/// How `ep` obtains the radical.
#[derive(Clone, Debug)]
pub enum EpMode {
    Exact,
    /// A claimed radical; its radicality is assumed, containment is verified.
    Assisted(IdealHandle),
}

#[derive(Clone, Debug)]
pub struct EpReport {
    pub ep: u64,
    pub radical: IdealHandle,
    /// The radical was supplied rather than computed.
    pub radical_assumed: bool,
}

fn is_monomial(f: &MultiPoly) -> bool {
    f.num_terms() == 1
}

/// Radical of a principal, monomial or zero-dimensional ideal.
fn exact_radical(i: &IdealHandle) -> Result<IdealHandle, BoundsError> {
    let ring = i.ring();
    if i.is_unit() || i.is_zero_ideal() {
        return Ok(i.clone());
    }
    let gb = i.groebner_basis();
    if gb.len() == 1 {
        return Ok(IdealHandle::new(ring, vec![squarefree_part(&gb[0])]));
    }
    if gb.iter().all(is_monomial) {
        let gens = gb
            .iter()
            .map(|g| {
                let (e, _) = g.terms().next().unwrap();
                let e = e.iter().map(|k| (*k > 0) as u32).collect();
                MultiPoly::monomial(ring, e, Coefficient::one(ring.p()))
            })
            .collect();
        return Ok(IdealHandle::new(ring, gens));
    }
    if i.is_zero_dimensional() {
        return radical_zero_dim(i).map_err(|_| BoundsError::UnsupportedIdealShape);
    }
    Err(BoundsError::UnsupportedIdealShape)
}

/// `f ∈ √I`, by `1 ∈ I + (1 − z·f)` in a ring with a fresh variable `z`.
pub fn in_radical(f: &MultiPoly, i: &IdealHandle) -> bool {
    let ring = i.ring();
    let z = fresh_var(ring);
    let big = ring.with_var(&z);
    let mut gens: Vec<MultiPoly> = i.gens().iter().map(|g| g.embed(&big)).collect();
    gens.push(big.one().sub(&big.var(&z).mul(&f.embed(&big))));
    IdealHandle::new(&big, gens).is_unit()
}

/// Least `r` with `J^r ⊆ I`, tracking normal forms of the degree-`r` products.
fn least_power_inside(j: &IdealHandle, i: &IdealHandle) -> u64 {
    if i.is_unit() {
        return 0;
    }
    let gens: Vec<MultiPoly> = j.groebner_basis().to_vec();
    let mut current: BTreeSet<String> = BTreeSet::new();
    let mut layer: Vec<MultiPoly> = Vec::new();
    for g in &gens {
        let nf = i.normal_form(g);
        if !nf.is_zero() && current.insert(nf.to_string()) {
            layer.push(nf);
        }
    }
    let mut r = 1;
    while !layer.is_empty() {
        r += 1;
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for a in &layer {
            for g in &gens {
                let nf = i.normal_form(&a.mul(g));
                if !nf.is_zero() && seen.insert(nf.to_string()) {
                    next.push(nf);
                }
            }
        }
        layer = next;
    }
    r
}

/// `ep(I)`: the least `r` with `(√I)^r ⊆ I`.
pub fn ep(i: &IdealHandle, mode: &EpMode) -> Result<EpReport, BoundsError> {
    let (radical, assumed) = match mode {
        EpMode::Exact => (exact_radical(i)?, false),
        EpMode::Assisted(j) => {
            if !j.contains_ideal(i) {
                return Err(BoundsError::NotContaining);
            }
            if let Some(g) = j.gens().iter().find(|g| !in_radical(g, i)) {
                return Err(BoundsError::NotInRadical(g.to_string()));
            }
            (j.clone(), true)
        }
    };
    if i.is_zero_ideal() {
        return Ok(EpReport { ep: 1, radical, radical_assumed: assumed });
    }
    Ok(EpReport { ep: least_power_inside(&radical, i), radical, radical_assumed: assumed })
}

/// `ep` of the component of a zero-dimensional ideal at a rational point, computed as
/// `ep(I + 𝔪_Q^K)` with `K` the length of `R/I`.
pub fn ep_at(i: &IdealHandle, q: &PlanarPoint) -> Result<u64, BoundsError> {
    let k = i.standard_monomial_count().ok_or(BoundsError::UnsupportedIdealShape)?;
    let ring = i.ring();
    let m = IdealHandle::new(
        ring,
        (0..ring.nvars())
            .map(|v| MultiPoly::var(ring, v).sub(&MultiPoly::constant(ring, q.coords()[v].clone())))
            .collect(),
    );
    let local = i.sum(&m.power(k.max(1) as u32));
    Ok(ep(&local, &EpMode::Exact)?.ep)
}

/// The ideal generated by `σ*(v) − v` over the chart variables.
#[derive(Clone, Debug)]
pub struct FixedIdeal {
    pub sigma: ChartAutomorphism,
    pub ideal: IdealHandle,
}

/// Fixed-point ideal of `σ`. For rational images the numerators are used, which is the
/// ideal near every point where the denominators are units.
pub fn fixed_ideal(sigma: &ChartAutomorphism) -> FixedIdeal {
    let ring = sigma.images[0].ring().clone();
    FixedIdeal { sigma: sigma.clone(), ideal: IdealHandle::new(&ring, sigma.fixed_numerators().to_vec()) }
}

/// Codifferent data of `R = A[t]/(f)` over `A = k[x, y]` at a point.
#[derive(Clone, Debug)]
pub struct CodifferentReport {
    pub f: MultiPoly,
    pub delta: MultiPoly,
    pub divisor: MultiPoly,
    /// `Ann_A(R/(Δ))` as an ideal of `A`.
    pub annihilator: IdealHandle,
    pub r: u64,
    pub s: u64,
    pub warnings: Vec<String>,
}

/// `r` and `s` for a hypersurface presentation `f ∈ A[t]`, monic in `t`. `f` lives on a
/// ring whose variables are those of `A` followed by `t`; `g` and `P` live on `A`.
pub fn codifferent_r_s(f: &MultiPoly, t: &str, g: &MultiPoly, pt: &PlanarPoint) -> Result<CodifferentReport, BoundsError> {
    let big = f.ring().clone();
    let a = pt.ring().clone();
    let ti = big.index_of(t).ok_or_else(|| BoundsError::NotMonic(t.to_string()))?;
    let n = f.degree_in(ti);
    let lead = f.coeffs_in(ti).pop();
    if n == 0 || !lead.as_ref().and_then(|c| c.as_constant()).is_some_and(|c| c.is_one()) {
        return Err(BoundsError::NotMonic(t.to_string()));
    }
    let delta = f.partial_derivative(ti);
    let j = IdealHandle::new(&big, vec![f.clone(), delta.clone()]);
    let keep: Vec<&str> = a.vars().iter().map(|s| s.as_str()).collect();
    let ann = eliminate(&j, &keep);
    let ann = IdealHandle::new(&a, ann.gens().iter().map(|h| h.contract(&a).expect("t eliminated")).collect());

    let cap = (n as u64) * f.total_degree().max(1) * 2;
    let mut r = 0;
    let mut gp = a.one();
    while !ann.contains(&gp) {
        r += 1;
        if r > cap {
            return Err(BoundsError::AnnihilatorCapExceeded(cap));
        }
        gp = gp.mul(g);
    }

    let mut fiber = vec![f.clone(), delta.clone()];
    for (k, v) in a.vars().iter().enumerate() {
        fiber.push(big.var(v).sub(&MultiPoly::constant(&big, pt.coords()[k].clone())));
    }
    let s = IdealHandle::new(&big, fiber).standard_monomial_count().expect("fiber of a finite algebra");

    let mut warnings = Vec::new();
    let gi = IdealHandle::new(&a, vec![g.clone()]);
    if let Some(h) = ann.gens().iter().find(|h| !in_radical(h, &gi)) {
        warnings.push(format!("R is not étale along {h} = 0 away from the divisor"));
    }
    Ok(CodifferentReport { f: f.clone(), delta, divisor: g.clone(), annihilator: ann, r, s, warnings })
}

/// Inputs and value of the depth bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub p: u64,
    pub group_order: u64,
    pub i_x: u64,
    pub ep_max: u64,
    pub r: u64,
    pub s: u64,
    pub m: u64,
    /// `2^(M−1)·i_x·|G|`.
    pub m1: BigUint,
    /// `(2p+1)^M·ep_max`.
    pub m2: BigUint,
    pub n: BigUint,
    /// The sheaf is locally constant near the point and `N = 2`.
    pub locally_constant: bool,
}

impl BoundReport {
    pub fn locally_constant(p: u64) -> Self {
        BoundReport {
            p,
            group_order: 1,
            i_x: 1,
            ep_max: 0,
            r: 0,
            s: 0,
            m: 0,
            m1: BigUint::from(0u32),
            m2: BigUint::from(0u32),
            n: BigUint::from(2u32),
            locally_constant: true,
        }
    }
}

/// `N = 2^(M−1)·i_x·|G| + (2p+1)^M·ep_max·i_x·|G|` with `M = r·s·i_x`.
pub fn depth_bound(p: u64, group_order: u64, i_x: u64, ep_max: u64, r: u64, s: u64) -> Result<BoundReport, BoundsError> {
    if i_x != 1 && i_x != 2 {
        return Err(BoundsError::InvalidIx(i_x));
    }
    let m = r * s * i_x;
    if m == 0 || group_order == 0 || ep_max == 0 {
        return Err(BoundsError::InvalidInput("r, s, |G| and ep_max must be positive".into()));
    }
    let e = u32::try_from(m).map_err(|_| BoundsError::InvalidInput("M too large".into()))?;
    let ig = BigUint::from(i_x) * BigUint::from(group_order);
    let m1 = BigUint::from(2u32).pow(e - 1) * &ig;
    let m2 = BigUint::from(2 * p + 1).pow(e) * BigUint::from(ep_max);
    let n = &m1 + &m2 * &ig;
    Ok(BoundReport { p, group_order, i_x, ep_max, r, s, m, m1, m2, n, locally_constant: false })
}

/// `N_C = M_1 + M_2·(D.C)_x·|G|`.
pub fn per_curve_bound(m1: &BigUint, m2: &BigUint, dcx: u64, group_order: u64) -> BigUint {
    m1 + m2 * BigUint::from(dcx) * BigUint::from(group_order)
}

/// 2 when `ξ` is conormal to `h = 0` at `P`, else 1.
pub fn i_x_for_covector(xi: &[Coefficient; 2], h: &MultiPoly, pt: &PlanarPoint) -> u64 {
    let dh: Vec<Coefficient> = (0..2).map(|i| h.partial_derivative(i).evaluate(pt.coords())).collect();
    if xi[0].mul(&dh[1]).sub(&xi[1].mul(&dh[0])).is_zero() {
        2
    } else {
        1
    }
}

/// A ring `A[t]` extending a planar chart by one variable.
pub fn presentation_ring(a: &Ring, t: &str) -> Ring {
    a.with_var(t)
}
