//! Finite discrete distributions in ℝ^d with exact rational weights, and
//! exact evaluation of `P(X+Y ∈ F)` and `P(X−Y ∈ K)` for i.i.d. `X, Y`.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so values are safe to share across concurrent tasks.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::SymmetrizeError;
use crate::rational::{format_rational, parse_rational};
use crate::Result;

/// The p-norms supported for centered balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PNorm {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Inf,
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::One => write!(f, "1"),
            PNorm::Two => write!(f, "2"),
            PNorm::Inf => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = SymmetrizeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(PNorm::One),
            "2" => Ok(PNorm::Two),
            "inf" | "infinity" | "max" => Ok(PNorm::Inf),
            other => Err(SymmetrizeError::InvalidParameter(format!(
                "unknown norm '{other}' (expected 1, 2, or inf)"
            ))),
        }
    }
}

/// A closed ball centered at the origin under a p-norm, with rational radius.
///
/// Measured in its own norm the ball has inner radius `radius` and diameter
/// `2·radius`, so the ratio `ρ = r/d` is always `1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormBall {
    dimension: usize,
    p: PNorm,
    radius: BigRational,
}

impl NormBall {
    pub fn new(dimension: usize, p: PNorm, radius: BigRational) -> Result<Self> {
        if dimension == 0 {
            return Err(SymmetrizeError::InvalidParameter(
                "ball dimension must be at least 1".into(),
            ));
        }
        if radius.is_negative() {
            return Err(SymmetrizeError::InvalidParameter(format!(
                "ball radius must be >= 0, got {}",
                format_rational(&radius)
            )));
        }
        Ok(Self {
            dimension,
            p,
            radius,
        })
    }

    /// The interval `[-radius, radius]` seen as a 1-d ball (all 1-d p-norms
    /// coincide).
    pub fn interval(radius: BigRational) -> Result<Self> {
        Self::new(1, PNorm::Inf, radius)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn p(&self) -> PNorm {
        self.p
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    /// Inner radius in the ball's own norm.
    pub fn inner_radius(&self) -> &BigRational {
        &self.radius
    }

    /// Diameter in the ball's own norm.
    pub fn diameter(&self) -> BigRational {
        &self.radius * BigRational::from_integer(BigInt::from(2))
    }

    /// `ρ = r(K)/d(K)`, always 1/2 for a centered ball in its own norm.
    pub fn rho(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    /// A copy scaled to radius `factor · radius`.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        Self::new(self.dimension, self.p, &self.radius * factor)
    }

    /// Exact closed-ball membership. For p = 2 the comparison is between
    /// squared norms, so no square roots are ever taken.
    pub fn contains(&self, point: &[BigRational]) -> Result<bool> {
        if point.len() != self.dimension {
            return Err(SymmetrizeError::DimensionMismatch {
                left: self.dimension,
                right: point.len(),
            });
        }
        Ok(match self.p {
            PNorm::One => {
                let norm: BigRational = point.iter().map(|c| c.abs()).sum();
                norm <= self.radius
            }
            PNorm::Inf => point.iter().all(|c| c.abs() <= self.radius),
            PNorm::Two => {
                let norm_sq: BigRational = point.iter().map(|c| c * c).sum();
                norm_sq <= &self.radius * &self.radius
            }
        })
    }
}

/// One support point with its probability weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub point: Vec<BigRational>,
    pub weight: BigRational,
}

/// A finite discrete probability distribution on ℝ^d.
///
/// Canonical form: duplicate points merged, atoms sorted lexicographically by
/// point, all weights positive and summing exactly to 1. Equality is list
/// equality of the canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteDistribution {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl DiscreteDistribution {
    /// Build a distribution, merging duplicate points and sorting. Weights
    /// must be positive and sum exactly to 1 after merging.
    pub fn new(dimension: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dimension == 0 {
            return Err(SymmetrizeError::InvalidDistribution(
                "dimension must be at least 1".into(),
            ));
        }
        if atoms.is_empty() {
            return Err(SymmetrizeError::InvalidDistribution(
                "a distribution needs at least one atom".into(),
            ));
        }
        for atom in &atoms {
            if atom.point.len() != dimension {
                return Err(SymmetrizeError::DimensionMismatch {
                    left: dimension,
                    right: atom.point.len(),
                });
            }
            if !atom.weight.is_positive() {
                return Err(SymmetrizeError::InvalidDistribution(format!(
                    "atom weight {} is not positive",
                    format_rational(&atom.weight)
                )));
            }
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.point.cmp(&b.point));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.point == atom.point => last.weight += atom.weight,
                _ => merged.push(atom),
            }
        }
        let total: BigRational = merged.iter().map(|a| a.weight.clone()).sum();
        if !total.is_one() {
            return Err(SymmetrizeError::InvalidDistribution(format!(
                "weights sum to {}, expected exactly 1",
                format_rational(&total)
            )));
        }
        Ok(Self {
            dimension,
            atoms: merged,
        })
    }

    /// Point mass at the given point.
    pub fn point_mass(point: Vec<BigRational>) -> Result<Self> {
        let dimension = point.len();
        Self::new(
            dimension,
            vec![Atom {
                point,
                weight: BigRational::one(),
            }],
        )
    }

    /// Uniform distribution on a list of 1-d points.
    pub fn uniform_on_line(points: &[BigRational]) -> Result<Self> {
        if points.is_empty() {
            return Err(SymmetrizeError::InvalidDistribution(
                "uniform distribution needs at least one point".into(),
            ));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(points.len() as i64));
        Self::new(
            1,
            points
                .iter()
                .map(|x| Atom {
                    point: vec![x.clone()],
                    weight: w.clone(),
                })
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Support of a 1-d distribution as scalars.
    pub fn support_1d(&self) -> Result<Vec<BigRational>> {
        if self.dimension != 1 {
            return Err(SymmetrizeError::DimensionMismatch {
                left: 1,
                right: self.dimension,
            });
        }
        Ok(self.atoms.iter().map(|a| a.point[0].clone()).collect())
    }

    /// `Σ wᵢ²`, the probability of the diagonal `X = Y`.
    pub fn diagonal_mass(&self) -> BigRational {
        self.atoms.iter().map(|a| &a.weight * &a.weight).sum()
    }

    /// Every atom scaled by a positive rational factor.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(SymmetrizeError::InvalidParameter(
                "scaling factor must be positive".into(),
            ));
        }
        Self::new(
            self.dimension,
            self.atoms
                .iter()
                .map(|a| Atom {
                    point: a.point.iter().map(|c| c * factor).collect(),
                    weight: a.weight.clone(),
                })
                .collect(),
        )
    }

    /// Every atom translated by `t`.
    pub fn translated(&self, t: &[BigRational]) -> Result<Self> {
        if t.len() != self.dimension {
            return Err(SymmetrizeError::DimensionMismatch {
                left: self.dimension,
                right: t.len(),
            });
        }
        Self::new(
            self.dimension,
            self.atoms
                .iter()
                .map(|a| Atom {
                    point: a.point.iter().zip(t).map(|(c, dt)| c + dt).collect(),
                    weight: a.weight.clone(),
                })
                .collect(),
        )
    }

    /// Product measure of independent factors; the result lives in the sum
    /// of the factor dimensions.
    pub fn product(factors: &[&DiscreteDistribution]) -> Result<Self> {
        if factors.is_empty() {
            return Err(SymmetrizeError::InvalidDistribution(
                "product of zero factors".into(),
            ));
        }
        let dimension = factors.iter().map(|f| f.dimension).sum();
        let mut atoms = vec![Atom {
            point: Vec::new(),
            weight: BigRational::one(),
        }];
        for factor in factors {
            let mut next = Vec::with_capacity(atoms.len() * factor.len());
            for partial in &atoms {
                for fa in &factor.atoms {
                    let mut point = partial.point.clone();
                    point.extend(fa.point.iter().cloned());
                    next.push(Atom {
                        point,
                        weight: &partial.weight * &fa.weight,
                    });
                }
            }
            atoms = next;
        }
        Self::new(dimension, atoms)
    }

    /// Parse the JSON wire form.
    pub fn from_json(raw: &str) -> Result<Self> {
        let wire: DistributionJson =
            serde_json::from_str(raw).map_err(|e| SymmetrizeError::Malformed(e.to_string()))?;
        wire.try_into()
    }

    /// Serialize to the JSON wire form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DistributionJson::from(self))
            .expect("distribution serialization cannot fail")
    }
}

/// Wire form: `{"dimension": d, "atoms": [{"point": ["p/q", ...], "weight": "p/q"}, ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DistributionJson {
    pub dimension: usize,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtomJson {
    pub point: Vec<String>,
    pub weight: String,
}

impl From<&DiscreteDistribution> for DistributionJson {
    fn from(d: &DiscreteDistribution) -> Self {
        Self {
            dimension: d.dimension,
            atoms: d
                .atoms
                .iter()
                .map(|a| AtomJson {
                    point: a.point.iter().map(format_rational).collect(),
                    weight: format_rational(&a.weight),
                })
                .collect(),
        }
    }
}

impl TryFrom<DistributionJson> for DiscreteDistribution {
    type Error = SymmetrizeError;

    fn try_from(wire: DistributionJson) -> Result<Self> {
        let atoms = wire
            .atoms
            .into_iter()
            .map(|a| {
                let point = a
                    .point
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?;
                let weight = parse_rational(&a.weight)?;
                Ok(Atom { point, weight })
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteDistribution::new(wire.dimension, atoms)
    }
}

/// `P(X + Y ∈ F)` for i.i.d. `X, Y ~ mu`, by exact enumeration of ordered
/// atom pairs. Closed-ball membership: boundary counts as inside.
pub fn prob_sum_in(mu: &DiscreteDistribution, f: &NormBall) -> Result<BigRational> {
    check_dims(mu, f)?;
    pair_probability(mu, |xi, xj| {
        let sum: Vec<BigRational> = xi.iter().zip(xj).map(|(a, b)| a + b).collect();
        f.contains(&sum)
    })
}

/// `P(X − Y ∈ K)` for i.i.d. `X, Y ~ mu`, by exact enumeration. `K` is a
/// centered ball, so the result is symmetric in the pair order.
pub fn prob_diff_in(mu: &DiscreteDistribution, k: &NormBall) -> Result<BigRational> {
    check_dims(mu, k)?;
    pair_probability(mu, |xi, xj| {
        let diff: Vec<BigRational> = xi.iter().zip(xj).map(|(a, b)| a - b).collect();
        k.contains(&diff)
    })
}

fn check_dims(mu: &DiscreteDistribution, ball: &NormBall) -> Result<()> {
    if mu.dimension() != ball.dimension() {
        return Err(SymmetrizeError::DimensionMismatch {
            left: mu.dimension(),
            right: ball.dimension(),
        });
    }
    Ok(())
}

/// Σ over ordered pairs of `wᵢ·wⱼ` where the pair predicate holds. O(m²)
/// enumeration; supports stay small enough at desk scale that no spatial
/// indexing is warranted.
fn pair_probability<P>(mu: &DiscreteDistribution, mut included: P) -> Result<BigRational>
where
    P: FnMut(&[BigRational], &[BigRational]) -> Result<bool>,
{
    let mut total = BigRational::zero();
    for ai in mu.atoms() {
        for aj in mu.atoms() {
            if included(&ai.point, &aj.point)? {
                total += &ai.weight * &aj.weight;
            }
        }
    }
    Ok(total)
}

/// Which probability goes in the numerator of [`ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioMode {
    Sum,
    Diff,
}

impl std::str::FromStr for RatioMode {
    type Err = SymmetrizeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sum" => Ok(RatioMode::Sum),
            "diff" => Ok(RatioMode::Diff),
            other => Err(SymmetrizeError::InvalidParameter(format!(
                "unknown mode '{other}' (expected sum or diff)"
            ))),
        }
    }
}

/// Outcome of [`ratio`]: defined quotient, or the distinguished undefined
/// case carrying the numerator so callers can flag a bound violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioOutcome {
    Defined(BigRational),
    Undefined { numerator: BigRational },
}

/// `P(X±Y ∈ F) / P(X−Y ∈ K)`, exactly. For a centered ball `K` the
/// denominator is at least the diagonal mass `Σwᵢ² > 0`, so the undefined
/// branch is unreachable for valid inputs; it exists so a degenerate `K`
/// can never crash the caller.
pub fn ratio(
    mu: &DiscreteDistribution,
    f: &NormBall,
    k: &NormBall,
    mode: RatioMode,
) -> Result<RatioOutcome> {
    let numerator = match mode {
        RatioMode::Sum => prob_sum_in(mu, f)?,
        RatioMode::Diff => prob_diff_in(mu, f)?,
    };
    let denominator = prob_diff_in(mu, k)?;
    if denominator.is_zero() {
        return Ok(RatioOutcome::Undefined { numerator });
    }
    Ok(RatioOutcome::Defined(numerator / denominator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio as q;
    use proptest::prelude::*;

    fn interval(r: BigRational) -> NormBall {
        NormBall::interval(r).unwrap()
    }

    fn uniform(points: &[i64]) -> DiscreteDistribution {
        let pts: Vec<BigRational> = points.iter().map(|&p| q(p, 1)).collect();
        DiscreteDistribution::uniform_on_line(&pts).unwrap()
    }

    #[test]
    fn point_mass_sum_probability_is_one() {
        let mu = DiscreteDistribution::point_mass(vec![q(0, 1)]).unwrap();
        let f = interval(q(1, 1));
        assert_eq!(prob_sum_in(&mu, &f).unwrap(), q(1, 1));
    }

    #[test]
    fn two_point_uniform_sum_probability() {
        // Only the two mixed-sign ordered pairs land at 0.
        let mu = uniform(&[-1, 1]);
        let f = interval(q(1, 1));
        assert_eq!(prob_sum_in(&mu, &f).unwrap(), q(1, 2));
    }

    #[test]
    fn point_mass_diff_probability_is_one_even_at_radius_zero() {
        let mu = DiscreteDistribution::point_mass(vec![q(5, 1), q(-3, 1)]).unwrap();
        let k = NormBall::new(2, PNorm::Two, q(0, 1)).unwrap();
        assert_eq!(prob_diff_in(&mu, &k).unwrap(), q(1, 1));
    }

    #[test]
    fn separated_support_diff_probability_is_diagonal() {
        let mu = uniform(&[0, 3]);
        let k = interval(q(1, 1));
        assert_eq!(prob_diff_in(&mu, &k).unwrap(), q(1, 2));
    }

    #[test]
    fn ratio_point_mass_is_one() {
        let mu = DiscreteDistribution::point_mass(vec![q(0, 1)]).unwrap();
        let f = interval(q(2, 1));
        let k = interval(q(3, 1));
        match ratio(&mu, &f, &k, RatioMode::Sum).unwrap() {
            RatioOutcome::Defined(r) => assert_eq!(r, q(1, 1)),
            RatioOutcome::Undefined { .. } => panic!("denominator cannot vanish"),
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mu = uniform(&[0, 1]);
        let f = NormBall::new(2, PNorm::Inf, q(1, 1)).unwrap();
        assert!(matches!(
            prob_sum_in(&mu, &f),
            Err(SymmetrizeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn duplicate_atoms_merge_and_sort() {
        let atoms = vec![
            Atom {
                point: vec![q(1, 1)],
                weight: q(1, 4),
            },
            Atom {
                point: vec![q(0, 1)],
                weight: q(1, 2),
            },
            Atom {
                point: vec![q(1, 1)],
                weight: q(1, 4),
            },
        ];
        let mu = DiscreteDistribution::new(1, atoms).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.atoms()[0].point[0], q(0, 1));
        assert_eq!(mu.atoms()[1].weight, q(1, 2));
    }

    #[test]
    fn weight_sum_must_be_exactly_one() {
        let atoms = vec![Atom {
            point: vec![q(0, 1)],
            weight: q(999_999, 1_000_000),
        }];
        assert!(DiscreteDistribution::new(1, atoms).is_err());
    }

    #[test]
    fn json_roundtrip_preserves_canonical_form() {
        let mu = uniform(&[-2, 5, 7]);
        let back = DiscreteDistribution::from_json(&mu.to_json()).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn json_rejects_bad_weight_sum() {
        let raw = r#"{"dimension":1,"atoms":[{"point":["0"],"weight":"1/3"}]}"#;
        assert!(DiscreteDistribution::from_json(raw).is_err());
    }

    #[test]
    fn l2_membership_compares_squares() {
        let ball = NormBall::new(2, PNorm::Two, q(5, 1)).unwrap();
        // 3-4-5 triangle: boundary point is inside a closed ball.
        assert!(ball.contains(&[q(3, 1), q(4, 1)]).unwrap());
        assert!(!ball.contains(&[q(3, 1), q(41, 10)]).unwrap());
    }

    #[test]
    fn product_of_uniforms_multiplies_probabilities() {
        let mu = uniform(&[-1, 1]);
        let prod = DiscreteDistribution::product(&[&mu, &mu]).unwrap();
        assert_eq!(prod.dimension(), 2);
        assert_eq!(prod.len(), 4);
        let f = NormBall::new(2, PNorm::Inf, q(1, 1)).unwrap();
        let f1 = interval(q(1, 1));
        let expected = prob_sum_in(&mu, &f1).unwrap();
        assert_eq!(
            prob_sum_in(&prod, &f).unwrap(),
            &expected * &expected
        );
    }

    // Strategy: small random 1-d distributions with bounded denominators.
    fn arb_distribution() -> impl Strategy<Value = DiscreteDistribution> {
        (1usize..6)
            .prop_flat_map(|m| {
                (
                    proptest::collection::vec((-40i64..40, 1i64..8), m),
                    proptest::collection::vec(1u32..6, m),
                )
            })
            .prop_map(|(coords, weights)| {
                let total: u32 = weights.iter().sum();
                let atoms = coords
                    .into_iter()
                    .zip(weights)
                    .map(|((n, d), w)| Atom {
                        point: vec![q(n, d)],
                        weight: BigRational::new(BigInt::from(w), BigInt::from(total)),
                    })
                    .collect();
                DiscreteDistribution::new(1, atoms).unwrap()
            })
    }

    proptest! {
        #[test]
        fn diff_probability_dominates_diagonal_mass(mu in arb_distribution(), r in 0i64..5) {
            let k = interval(q(r, 1));
            let p = prob_diff_in(&mu, &k).unwrap();
            prop_assert!(p >= mu.diagonal_mass());
            prop_assert!(p.is_positive());
        }

        #[test]
        fn scaling_atoms_and_radii_preserves_probabilities(
            mu in arb_distribution(),
            lam_num in 1i64..9,
            lam_den in 1i64..9,
            r in 0i64..6,
        ) {
            let lam = q(lam_num, lam_den);
            let f = interval(q(r, 1));
            let f_scaled = interval(q(r, 1) * &lam);
            let mu_scaled = mu.scaled(&lam).unwrap();
            prop_assert_eq!(
                prob_sum_in(&mu, &f).unwrap(),
                prob_sum_in(&mu_scaled, &f_scaled).unwrap()
            );
            prop_assert_eq!(
                prob_diff_in(&mu, &f).unwrap(),
                prob_diff_in(&mu_scaled, &f_scaled).unwrap()
            );
        }

        #[test]
        fn diff_probability_is_translation_invariant(
            mu in arb_distribution(),
            t in -20i64..20,
            r in 0i64..6,
        ) {
            let k = interval(q(r, 1));
            let shifted = mu.translated(&[q(t, 1)]).unwrap();
            prop_assert_eq!(
                prob_diff_in(&mu, &k).unwrap(),
                prob_diff_in(&shifted, &k).unwrap()
            );
        }

        #[test]
        fn translating_atoms_shifts_the_sum_target(
            mu in arb_distribution(),
            t in -10i64..10,
            r in 0i64..6,
        ) {
            // Test-local oracle: membership in the shifted box F + 2t.
            let shift = q(2 * t, 1);
            let radius = q(r, 1);
            let shifted_mu = mu.translated(&[q(t, 1)]).unwrap();
            let mut expected = BigRational::zero();
            for ai in shifted_mu.atoms() {
                for aj in shifted_mu.atoms() {
                    let s = &ai.point[0] + &aj.point[0];
                    if (s - &shift).abs() <= radius {
                        expected += &ai.weight * &aj.weight;
                    }
                }
            }
            let f = interval(radius);
            prop_assert_eq!(prob_sum_in(&mu, &f).unwrap(), expected);
        }

        #[test]
        fn enlarging_a_ball_never_decreases_probabilities(
            mu in arb_distribution(),
            r in 0i64..6,
            bump in 0i64..4,
        ) {
            let small = interval(q(r, 1));
            let large = interval(q(r + bump, 1));
            prop_assert!(prob_sum_in(&mu, &large).unwrap() >= prob_sum_in(&mu, &small).unwrap());
            prop_assert!(prob_diff_in(&mu, &large).unwrap() >= prob_diff_in(&mu, &small).unwrap());
        }

        #[test]
        fn construction_order_does_not_matter(mu in arb_distribution()) {
            let mut reversed: Vec<Atom> = mu.atoms().to_vec();
            reversed.reverse();
            let rebuilt = DiscreteDistribution::new(1, reversed).unwrap();
            prop_assert_eq!(rebuilt, mu);
        }
    }
}
