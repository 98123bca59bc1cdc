//! Point blowups of two-variable affine charts, strict and total transforms of plane
//! curves, a round-based resolution driver and transport of automorphisms to the charts.
//!
//! Every chart reuses the coordinate names of the root ring. Blowing up the center
//! `(a, b)` produces the x-chart `(x, y) ↦ (a + x, b + x·y)` and the y-chart
//! `(x, y) ↦ (a + x·y, b + y)`; the exceptional divisor is `x = 0`, resp. `y = 0`.
//! The y-chart is only consulted at its origin, the one point of the exceptional
//! divisor the x-chart misses.

use thiserror::Error;

use crate::exactalg::{Coefficient, MultiPoly, RatFun, Ring};
use crate::ideals::{squarefree_part, to_unipoly};
use crate::localgeom::{multiplicity_at, LocalGeomError, PlanarPoint};

/// Rounds after which the driver gives up.
const MAX_ROUNDS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("the zero polynomial does not define a curve")]
    ZeroCurve,
    #[error("the curve does not pass through the center")]
    NotOnCurve,
    #[error("the automorphism does not fix the blowup center")]
    NotFixingCenter,
    #[error("the extended automorphism is not regular at the origin of the {0}-chart")]
    NotRegularOnChart(&'static str),
    #[error("singular points of the strict transform are not rational over the coefficient field: roots of {0}")]
    Unresolvable(String),
    #[error("exceptional multiplicity {mult} at stage {stage} exceeds 2^(stage-1)*mult = {bound}")]
    BoundViolated { stage: u32, mult: u64, bound: u64 },
    #[error("resolution did not finish within {0} rounds")]
    RoundLimit(u32),
    #[error(transparent)]
    Geometry(#[from] LocalGeomError),
}

impl BlowupError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            BlowupError::ZeroCurve => "zero-curve",
            BlowupError::NotOnCurve => "not-on-curve",
            BlowupError::NotFixingCenter => "not-fixing-center",
            BlowupError::NotRegularOnChart(_) => "not-regular-on-chart",
            BlowupError::Unresolvable(_) => "unresolvable",
            BlowupError::BoundViolated { .. } => "bound-violated",
            BlowupError::RoundLimit(_) => "round-limit",
            BlowupError::Geometry(e) => e.code(),
        }
    }
}

/// Which standard chart of a blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X = 0,
    Y = 1,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::X, Side::Y];

    pub fn name(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }
}

/// One point blowup inside a tree of charts.
#[derive(Clone, Debug)]
pub struct BlowupNode {
    /// Chart (index into the tree's chart list) containing the center.
    pub parent: usize,
    pub center: PlanarPoint,
    /// Charts created by this blowup, indexed by [`Side`].
    pub children: [usize; 2],
    /// `maps[side]` gives the parent coordinates in terms of the child coordinates.
    pub maps: [[MultiPoly; 2]; 2],
    /// Equation of the exceptional divisor in each child chart.
    pub exceptional: [MultiPoly; 2],
    /// Multiplicity of the exceptional divisor in the total transform of the curve.
    pub exc_mult: u64,
    /// Length of the chain of successive blowups ending here.
    pub stage: u32,
}

impl BlowupNode {
    pub fn pullback(&self, f: &MultiPoly, side: Side) -> MultiPoly {
        f.compose(&self.maps[side as usize])
    }

    pub fn ring(&self) -> &Ring {
        self.center.ring()
    }
}

/// Blows up `center`, a point of chart `parent`. Child indices are left at zero until
/// the node is attached to a tree.
pub fn blowup_point(parent: usize, center: &PlanarPoint) -> BlowupNode {
    let ring = center.ring();
    let [a, b] = center.coords().clone();
    let (x, y) = (ring.var(&ring.vars()[0]), ring.var(&ring.vars()[1]));
    let (a, b) = (MultiPoly::constant(ring, a), MultiPoly::constant(ring, b));
    let xy = x.mul(&y);
    BlowupNode {
        parent,
        center: center.clone(),
        children: [0, 0],
        maps: [[a.add(&x), b.add(&xy)], [a.add(&xy), b.add(&y)]],
        exceptional: [x, y],
        exc_mult: 0,
        stage: 1,
    }
}

/// Strict transforms of a curve in both charts of a blowup.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformed {
    pub strict: [MultiPoly; 2],
    /// Order of `f` at the center: the exceptional factor splits off to this power.
    pub exc_mult: u64,
}

/// Pulls `f` back along both charts and divides out the exceptional equation.
pub fn transform_curve(f: &MultiPoly, node: &BlowupNode) -> Result<Transformed, BlowupError> {
    if f.is_zero() {
        return Err(BlowupError::ZeroCurve);
    }
    let m = multiplicity_at(f, &node.center).map_err(|e| match e {
        LocalGeomError::NotOnCurve => BlowupError::NotOnCurve,
        e => e.into(),
    })?;
    let strict = Side::BOTH.map(|s| {
        node.pullback(f, s)
            .div_exact(&node.exceptional[s as usize].pow(m))
            .expect("pullback is divisible by the exceptional equation to the multiplicity")
    });
    Ok(Transformed { strict, exc_mult: m })
}

/// A chart of the resolution tree.
#[derive(Clone, Debug)]
pub struct ChartRecord {
    pub name: String,
    /// Blowup node and side that created this chart; `None` for the root.
    pub origin: Option<(usize, Side)>,
    pub strict: MultiPoly,
    /// Pullback of the curve equation.
    pub total: MultiPoly,
    /// Transforms of the exceptional divisors met so far, with their multiplicities in
    /// the total transform; the newest is last.
    pub exceptional: Vec<(MultiPoly, u64)>,
    /// Stage of the newest exceptional divisor (0 for the root).
    pub stage: u32,
    /// Root coordinates in terms of this chart's coordinates.
    pub to_root: [MultiPoly; 2],
}

/// Record of a resolution of a plane curve germ by point blowups.
#[derive(Clone, Debug)]
pub struct BlowupTree {
    pub center: PlanarPoint,
    /// The curve actually resolved (the reduced curve when `non_reduced`).
    pub curve: MultiPoly,
    /// Multiplicity of `curve` at the center.
    pub multiplicity: u64,
    pub charts: Vec<ChartRecord>,
    pub nodes: Vec<BlowupNode>,
    pub stages: u32,
    /// Largest exceptional multiplicity in the total transform.
    pub m1: u64,
    /// The input had a repeated factor through the center.
    pub non_reduced: bool,
}

impl BlowupTree {
    /// Charts that were not blown up further.
    pub fn leaves(&self) -> Vec<usize> {
        let parents: std::collections::BTreeSet<usize> = self.nodes.iter().map(|n| n.parent).collect();
        (0..self.charts.len()).filter(|i| !parents.contains(i)).collect()
    }

    /// Largest exceptional multiplicity among nodes of stage at most `m`.
    pub fn max_multiplicity_through(&self, m: u32) -> u64 {
        self.nodes.iter().filter(|n| n.stage <= m).map(|n| n.exc_mult).max().unwrap_or(0)
    }

    /// Checks `max mult over stages ≤ M` against `2^(M−1)·mult` for every `M`.
    pub fn check_multiplicity_bound(&self) -> Result<(), BlowupError> {
        for m in 1..=self.stages {
            let mult = self.max_multiplicity_through(m);
            let bound = (1u64 << (m - 1).min(63)).saturating_mul(self.multiplicity);
            if mult > bound {
                return Err(BlowupError::BoundViolated { stage: m, mult, bound });
            }
        }
        Ok(())
    }

    /// `total = strict · Π E^m` in every chart, and the total transform is the curve
    /// composed with the chart's map to the root.
    pub fn total_transform_identity(&self) -> bool {
        self.charts.iter().all(|c| {
            let prod = c.exceptional.iter().fold(c.strict.clone(), |acc, (e, m)| acc.mul(&e.pow(*m)));
            prod == c.total && self.curve.compose(&c.to_root) == c.total
        })
    }
}

/// Singular points of `strict` on the newest exceptional divisor of a chart created on
/// `side`: the whole line `x = 0` in the x-chart, only the origin in the y-chart.
fn singular_points_over(strict: &MultiPoly, side: Side) -> Result<Vec<PlanarPoint>, BlowupError> {
    let ring = strict.ring();
    let p = ring.p();
    let zero = Coefficient::zero(p);
    match side {
        Side::Y => {
            let o = PlanarPoint::origin(ring);
            Ok(match multiplicity_at(strict, &o) {
                Ok(m) if m >= 2 => vec![o],
                _ => vec![],
            })
        }
        Side::X => {
            let on_e = strict.specialize_var(0, &zero);
            let (roots, rest) = to_unipoly(&on_e, 1).rational_roots();
            let mut out = Vec::new();
            for (v, _) in roots {
                let q = PlanarPoint::new(ring, zero.clone(), v)?;
                if multiplicity_at(strict, &q)? >= 2 {
                    out.push(q);
                }
            }
            if rest.degree().unwrap_or(0) > 0 {
                let dx = to_unipoly(&strict.partial_derivative(0).specialize_var(0, &zero), 1);
                let dy = to_unipoly(&strict.partial_derivative(1).specialize_var(0, &zero), 1);
                let g = rest.gcd(&dx).gcd(&dy);
                if g.degree().unwrap_or(0) > 0 {
                    return Err(BlowupError::Unresolvable(g.to_string()));
                }
            }
            Ok(out)
        }
    }
}

/// Blows up every singular point of the strict transform lying over `P`, one round at
/// a time, until the strict transform is smooth over `P`.
pub fn resolve_curve(f: &MultiPoly, pt: &PlanarPoint) -> Result<BlowupTree, BlowupError> {
    if f.is_zero() {
        return Err(BlowupError::ZeroCurve);
    }
    let ring = pt.ring().clone();
    let mult_of = |g: &MultiPoly, q: &PlanarPoint| {
        multiplicity_at(g, q).map_err(|e| match e {
            LocalGeomError::NotOnCurve => BlowupError::NotOnCurve,
            e => e.into(),
        })
    };
    mult_of(f, pt)?;
    let red = squarefree_part(f);
    let cofactor = f.div_exact(&red).expect("squarefree part divides");
    let non_reduced = cofactor.as_constant().is_none() && cofactor.translate(pt.coords()).constant_term().is_zero();
    let curve = if non_reduced { red } else { f.clone() };
    let multiplicity = mult_of(&curve, pt)?;

    let root = ChartRecord {
        name: "root".into(),
        origin: None,
        strict: curve.clone(),
        total: curve.clone(),
        exceptional: Vec::new(),
        stage: 0,
        to_root: [ring.var(&ring.vars()[0]), ring.var(&ring.vars()[1])],
    };
    let mut tree = BlowupTree {
        center: pt.clone(),
        curve,
        multiplicity,
        charts: vec![root],
        nodes: Vec::new(),
        stages: 0,
        m1: 0,
        non_reduced,
    };
    let mut queue: Vec<(usize, PlanarPoint)> = if multiplicity >= 2 { vec![(0, pt.clone())] } else { vec![] };
    let mut rounds = 0;
    while !queue.is_empty() {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(BlowupError::RoundLimit(MAX_ROUNDS));
        }
        let mut next = Vec::new();
        for (ci, q) in queue {
            let chart = tree.charts[ci].clone();
            let mut node = blowup_point(ci, &q);
            node.stage = match chart.exceptional.last() {
                Some((e, _)) if e.translate(q.coords()).constant_term().is_zero() => chart.stage + 1,
                _ => 1,
            };
            node.exc_mult = mult_of(&chart.total, &q)?;
            let strict = transform_curve(&chart.strict, &node)?;
            let ni = tree.nodes.len();
            for side in Side::BOTH {
                let s = side as usize;
                let mut exceptional: Vec<(MultiPoly, u64)> = chart
                    .exceptional
                    .iter()
                    .map(|(e, m)| {
                        let k = e.translate(q.coords()).order();
                        let pulled = node.pullback(e, side);
                        (pulled.div_exact(&node.exceptional[s].pow(k)).expect("exceptional order divides"), *m)
                    })
                    .collect();
                exceptional.push((node.exceptional[s].clone(), node.exc_mult));
                let child = ChartRecord {
                    name: format!("{}.{}{}", chart.name, ni, side.name()),
                    origin: Some((ni, side)),
                    strict: strict.strict[s].clone(),
                    total: node.pullback(&chart.total, side),
                    exceptional,
                    stage: node.stage,
                    to_root: chart.to_root.clone().map(|c| c.compose(&node.maps[s])),
                };
                node.children[s] = tree.charts.len();
                for sing in singular_points_over(&child.strict, side)? {
                    next.push((tree.charts.len(), sing));
                }
                tree.charts.push(child);
            }
            tree.stages = tree.stages.max(node.stage);
            tree.m1 = tree.m1.max(node.exc_mult);
            tree.nodes.push(node);
        }
        queue = next;
    }
    tree.check_multiplicity_bound()?;
    Ok(tree)
}

/// An automorphism of a chart, as rational images of the coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartAutomorphism {
    pub images: [RatFun; 2],
}

impl ChartAutomorphism {
    pub fn from_polys(images: [MultiPoly; 2]) -> Self {
        ChartAutomorphism { images: images.map(RatFun::poly) }
    }

    pub fn identity(ring: &Ring) -> Self {
        Self::from_polys([ring.var(&ring.vars()[0]), ring.var(&ring.vars()[1])])
    }

    /// Polynomial images, when both denominators are constants.
    pub fn polynomial_images(&self) -> Option<[MultiPoly; 2]> {
        if !self.images.iter().all(RatFun::is_polynomial) {
            return None;
        }
        Some(self.images.clone().map(|r| {
            let c = r.den.as_constant().unwrap();
            r.num.scale(&c.inv())
        }))
    }

    pub fn fixes(&self, pt: &PlanarPoint) -> bool {
        self.images.iter().zip(pt.coords()).all(|(r, c)| r.evaluate(pt.coords()).as_ref() == Some(c))
    }

    /// Numerators of `σ*(v) − v`; they generate the fixed-point ideal near any point
    /// where the denominators do not vanish.
    pub fn fixed_numerators(&self) -> [MultiPoly; 2] {
        let ring = self.images[0].ring().clone();
        [0, 1].map(|i| {
            let v = RatFun::poly(MultiPoly::var(&ring, i));
            self.images[i].sub(&v).num
        })
    }
}

fn map_as_ratfun(m: &[MultiPoly; 2]) -> [RatFun; 2] {
    m.clone().map(RatFun::poly)
}

/// Lifts `σ` to both charts of `node`. Per chart the lift is an error when its images
/// have a pole at the chart origin.
pub fn transport_automorphism(
    sigma: &ChartAutomorphism,
    node: &BlowupNode,
) -> Result<[Result<ChartAutomorphism, BlowupError>; 2], BlowupError> {
    if !sigma.fixes(&node.center) {
        return Err(BlowupError::NotFixingCenter);
    }
    let ring = node.ring().clone();
    let [a, b] = node.center.coords().clone();
    let shift = |r: &RatFun, c: &Coefficient| r.sub(&RatFun::poly(MultiPoly::constant(&ring, c.clone())));
    let origin = PlanarPoint::origin(&ring);
    Ok(Side::BOTH.map(|side| {
        let pi = map_as_ratfun(&node.maps[side as usize]);
        // σ*(x − a) and σ*(y − b) pulled back to the chart.
        let sx = shift(&sigma.images[0].compose_rational(&pi), &a);
        let sy = shift(&sigma.images[1].compose_rational(&pi), &b);
        let images = match side {
            Side::X => [sx.clone(), sy.div(&sx)],
            Side::Y => [sx.div(&sy), sy.clone()],
        };
        if images.iter().any(|r| r.evaluate(origin.coords()).is_none()) {
            return Err(BlowupError::NotRegularOnChart(side.name()));
        }
        Ok(ChartAutomorphism { images })
    }))
}

/// Checks `π ∘ σ̄ = σ ∘ π` on the chart of `side`.
pub fn commutes_with_projection(
    sigma: &ChartAutomorphism,
    lifted: &ChartAutomorphism,
    node: &BlowupNode,
    side: Side,
) -> bool {
    let pi = map_as_ratfun(&node.maps[side as usize]);
    (0..2).all(|i| {
        let lhs = pi[i].compose_rational(&lifted.images);
        let rhs = sigma.images[i].compose_rational(&pi);
        lhs == rhs
    })
}

#[cfg(test)]
mod tests {
    use smallvec::smallvec;

    use super::*;
    use crate::exactalg::Exps;
    use crate::localgeom::is_smooth_point;

    /// The monomial `x^i y^j` as exponents.
    fn exps(i: u32, j: u32) -> Exps {
        smallvec![i, j]
    }

    fn ring() -> Ring {
        Ring::new(5, &["x", "y"])
    }

    fn poly(terms: &[(i64, u32, u32)]) -> MultiPoly {
        let r = ring();
        MultiPoly::from_terms(&r, terms.iter().map(|&(c, i, j)| (exps(i, j), Coefficient::from_i64(5, c))))
    }

    #[test]
    fn standard_charts() {
        let r = ring();
        let node = blowup_point(0, &PlanarPoint::origin(&r));
        assert_eq!(node.maps[0], [r.var("x"), r.var("x").mul(&r.var("y"))]);
        assert_eq!(node.maps[1], [r.var("x").mul(&r.var("y")), r.var("y")]);
        let node = blowup_point(0, &PlanarPoint::from_ints(&r, 1, 0));
        assert_eq!(node.maps[0][0], r.var("x").add(&r.int(1)));
    }

    #[test]
    fn cusp_transforms() {
        let r = ring();
        let node = blowup_point(0, &PlanarPoint::origin(&r));
        let t = transform_curve(&poly(&[(1, 0, 2), (-1, 3, 0)]), &node).unwrap();
        assert_eq!(t.exc_mult, 2);
        // y'^2 − x in the x-chart
        assert_eq!(t.strict[0], poly(&[(1, 0, 2), (-1, 1, 0)]));
        assert!(is_smooth_point(&t.strict[0], &PlanarPoint::origin(&r)));
        let t = transform_curve(&poly(&[(1, 0, 2), (-1, 5, 0)]), &node).unwrap();
        assert_eq!(t.strict[0], poly(&[(1, 0, 2), (-1, 3, 0)]));
        let t = transform_curve(&poly(&[(1, 1, 0), (-1, 0, 2)]), &node).unwrap();
        assert_eq!(t.exc_mult, 1);
    }

    #[test]
    fn composite_of_two_blowups_reproduces_exponents() {
        let r = ring();
        let f = poly(&[(1, 0, 2), (-1, 5, 0)]);
        let n1 = blowup_point(0, &PlanarPoint::origin(&r));
        let n2 = blowup_point(1, &PlanarPoint::origin(&r));
        let composite = n1.maps[0].clone().map(|c| c.compose(&n2.maps[0]));
        // (x, y) ↦ (x, x^2 y): f pulls back to x^4 (y^2 − x)
        assert_eq!(composite[1], poly(&[(1, 2, 1)]));
        assert_eq!(f.compose(&composite), poly(&[(1, 4, 2), (-1, 5, 0)]));
    }

    #[test]
    fn resolution_examples() {
        let r = ring();
        let o = PlanarPoint::origin(&r);
        let t = resolve_curve(&poly(&[(1, 0, 2), (-1, 3, 0)]), &o).unwrap();
        assert_eq!((t.stages, t.m1), (1, 2));
        let t = resolve_curve(&poly(&[(1, 0, 2), (-1, 5, 0)]), &o).unwrap();
        assert_eq!((t.stages, t.m1), (2, 4));
        assert!(t.total_transform_identity());
        let t = resolve_curve(&poly(&[(1, 1, 0), (-1, 0, 2)]), &o).unwrap();
        assert_eq!((t.stages, t.m1), (0, 0));
        assert!(t.nodes.is_empty());
    }

    #[test]
    fn node_with_two_branches() {
        // y^2 − x^2 − x^3 has two smooth branches: one blowup separates them.
        let t = resolve_curve(&poly(&[(1, 0, 2), (-1, 2, 0), (-1, 3, 0)]), &PlanarPoint::origin(&ring())).unwrap();
        assert_eq!((t.stages, t.m1), (1, 2));
        // Tacnode y^2 − x^4: two rounds.
        let t = resolve_curve(&poly(&[(1, 0, 2), (-1, 4, 0)]), &PlanarPoint::origin(&ring())).unwrap();
        assert_eq!((t.stages, t.m1), (2, 4));
    }

    #[test]
    fn non_reduced_input_is_flagged() {
        let f = poly(&[(1, 0, 2), (-1, 3, 0)]).mul(&poly(&[(1, 1, 0)]).pow(2));
        let t = resolve_curve(&f, &PlanarPoint::origin(&ring())).unwrap();
        assert!(t.non_reduced);
        assert_eq!(t.multiplicity, 3);
    }

    #[test]
    fn transport_translation() {
        // σ(x, τ) = (x, τ + x) lifts to (x, u) ↦ (x, u + 1) on the x-chart.
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let sigma = ChartAutomorphism::from_polys([x.clone(), y.add(&x)]);
        let node = blowup_point(0, &PlanarPoint::origin(&r));
        let [cx, cy] = transport_automorphism(&sigma, &node).unwrap();
        let cx = cx.unwrap();
        assert_eq!(cx.polynomial_images().unwrap(), [x.clone(), y.add(&r.one())]);
        assert!(commutes_with_projection(&sigma, &cx, &node, Side::X));
        let cy = cy.unwrap();
        assert!(commutes_with_projection(&sigma, &cy, &node, Side::Y));
    }

    #[test]
    fn transport_identity_and_failures() {
        let r = ring();
        let id = ChartAutomorphism::identity(&r);
        let node = blowup_point(0, &PlanarPoint::origin(&r));
        for res in transport_automorphism(&id, &node).unwrap() {
            assert_eq!(res.unwrap(), id);
        }
        let shift = ChartAutomorphism::from_polys([r.var("x").add(&r.one()), r.var("y")]);
        assert_eq!(transport_automorphism(&shift, &node).unwrap_err(), BlowupError::NotFixingCenter);
        // Swapping the coordinates exchanges the charts' origins.
        let swap = ChartAutomorphism::from_polys([r.var("y"), r.var("x")]);
        let [a, b] = transport_automorphism(&swap, &node).unwrap();
        assert_eq!(a.unwrap_err(), BlowupError::NotRegularOnChart("x"));
        assert_eq!(b.unwrap_err(), BlowupError::NotRegularOnChart("y"));
    }

    #[test]
    fn transport_rational_lift_matches_series() {
        // σ(x, y) = (x, y + x²); on the y-chart u = x/y ↦ x/(y + x²) = u/(1 + u²y).
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let sigma = ChartAutomorphism::from_polys([x.clone(), y.add(&x.pow(2))]);
        let node = blowup_point(0, &PlanarPoint::origin(&r));
        let cy = transport_automorphism(&sigma, &node).unwrap()[1].clone().unwrap();
        assert!(commutes_with_projection(&sigma, &cy, &node, Side::Y));
        let jet = crate::localgeom::jet_truncate_rational(&cy.images[0], &PlanarPoint::origin(&r), 8).unwrap();
        // u − u³y + u⁵y² − …
        assert_eq!(jet, poly(&[(1, 1, 0), (-1, 3, 1), (1, 5, 2)]));
    }

    fn arb_singular() -> impl proptest::strategy::Strategy<Value = MultiPoly> {
        use proptest::prelude::*;
        proptest::collection::vec(((0u32..6, 0u32..6), 1i64..5), 1..5).prop_map(|ts| {
            let r = ring();
            MultiPoly::from_terms(
                &r,
                ts.into_iter().filter(|((i, j), _)| i + j >= 2).map(|((i, j), c)| (exps(i, j), Coefficient::from_i64(5, c))),
            )
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn resolution_invariants(f in arb_singular()) {
            proptest::prop_assume!(!f.is_zero());
            let o = PlanarPoint::origin(&ring());
            match resolve_curve(&f, &o) {
                Ok(t) => {
                    proptest::prop_assert!(t.total_transform_identity());
                    proptest::prop_assert!(t.check_multiplicity_bound().is_ok());
                    for n in &t.nodes {
                        let parent_mult = multiplicity_at(&t.charts[n.parent].strict, &n.center).unwrap();
                        for c in n.children {
                            let child = &t.charts[c];
                            if let Some(q) = singular_points_over(&child.strict, child.origin.unwrap().1).unwrap().first() {
                                proptest::prop_assert!(multiplicity_at(&child.strict, q).unwrap() <= parent_mult);
                            }
                        }
                    }
                    for leaf in t.leaves() {
                        let side = t.charts[leaf].origin.map(|o| o.1);
                        if let Some(side) = side {
                            proptest::prop_assert!(singular_points_over(&t.charts[leaf].strict, side).unwrap().is_empty());
                        }
                    }
                }
                Err(BlowupError::Unresolvable(_)) => {}
                Err(e) => proptest::prop_assert!(false, "{e}"),
            }
        }
    }
}
