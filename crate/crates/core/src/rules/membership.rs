use serde::{Deserialize, Serialize};

use super::RulesError;

/// Grid resolution used by [`MembershipConfig::defuzzify`].
pub const DEFUZZ_GRID: usize = 101;

/// A piecewise-linear membership function given by `[x, y]` breakpoints.
///
/// Outside the breakpoint range the function holds its end values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PiecewiseLinear {
    points: Vec<[f64; 2]>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self, RulesError> {
        let f = Self { points };
        f.validate("")?;
        Ok(f)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    fn validate(&self, path: &str) -> Result<(), RulesError> {
        let bad = |message: String| RulesError::Membership {
            path: path.to_string(),
            message,
        };
        if self.points.len() < 2 {
            return Err(bad("needs at least two breakpoints".into()));
        }
        for (i, [x, y]) in self.points.iter().enumerate() {
            if !x.is_finite() || !(0.0..=1.0).contains(y) {
                return Err(bad(format!("breakpoint {i} = [{x}, {y}] out of range")));
            }
        }
        if self.points.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(bad("breakpoints must have strictly increasing x".into()));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0][0] {
            return pts[0][1];
        }
        for w in pts.windows(2) {
            let ([x0, y0], [x1, y1]) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        pts[pts.len() - 1][1]
    }
}

fn pl(points: &[[f64; 2]]) -> PiecewiseLinear {
    PiecewiseLinear {
        points: points.to_vec(),
    }
}

/// Membership degrees of a favorite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FvMembership {
    pub dislike: f64,
    pub normal: f64,
    pub like: f64,
}

/// A defuzzified recommendation strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Defuzzified {
    pub strength: f64,
    /// Set when every output membership was zero and the neutral 0.5 was used.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipConfig {
    pub av_high: PiecewiseLinear,
    pub fv_dislike: PiecewiseLinear,
    pub fv_normal: PiecewiseLinear,
    pub fv_like: PiecewiseLinear,
    pub out_negative: PiecewiseLinear,
    pub out_normal: PiecewiseLinear,
    pub out_positive: PiecewiseLinear,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        Self {
            av_high: pl(&[[0.0, 0.0], [0.3, 0.0], [0.7, 1.0], [1.0, 1.0]]),
            fv_dislike: pl(&[[-1.0, 1.0], [-0.2, 0.0], [1.0, 0.0]]),
            fv_normal: pl(&[[-1.0, 0.0], [-0.6, 0.0], [0.0, 1.0], [0.6, 0.0], [1.0, 0.0]]),
            fv_like: pl(&[[-1.0, 0.0], [0.2, 0.0], [1.0, 1.0]]),
            out_negative: pl(&[[0.0, 0.75], [0.1, 1.0], [0.5, 0.0], [1.0, 0.0]]),
            out_normal: pl(&[[0.0, 0.0], [0.1, 0.0], [0.5, 1.0], [0.9, 0.0], [1.0, 0.0]]),
            out_positive: pl(&[[0.0, 0.0], [0.5, 0.0], [0.9, 1.0], [1.0, 0.75]]),
        }
    }
}

impl MembershipConfig {
    pub fn validate(&self) -> Result<(), RulesError> {
        for (name, f) in self.functions() {
            f.validate(name)?;
        }
        Ok(())
    }

    fn functions(&self) -> [(&'static str, &PiecewiseLinear); 7] {
        [
            ("av_high", &self.av_high),
            ("fv_dislike", &self.fv_dislike),
            ("fv_normal", &self.fv_normal),
            ("fv_like", &self.fv_like),
            ("out_negative", &self.out_negative),
            ("out_normal", &self.out_normal),
            ("out_positive", &self.out_positive),
        ]
    }

    pub fn fuzzify_av(&self, av: f64) -> f64 {
        self.av_high.eval(av)
    }

    pub fn fuzzify_fv(&self, fv: f64) -> FvMembership {
        FvMembership {
            dislike: self.fv_dislike.eval(fv),
            normal: self.fv_normal.eval(fv),
            like: self.fv_like.eval(fv),
        }
    }

    /// Centroid of the union of the three output sets, each clipped at its
    /// degree, sampled on an evenly spaced grid over `[0, 1]`.
    pub fn defuzzify(&self, negative: f64, normal: f64, positive: f64) -> Defuzzified {
        let (mut moment, mut area) = (0.0, 0.0);
        for i in 0..DEFUZZ_GRID {
            let x = i as f64 / (DEFUZZ_GRID - 1) as f64;
            let mu = (self.out_negative.eval(x).min(negative))
                .max(self.out_normal.eval(x).min(normal))
                .max(self.out_positive.eval(x).min(positive));
            moment += x * mu;
            area += mu;
        }
        if area <= 0.0 {
            return Defuzzified {
                strength: 0.5,
                degenerate: true,
            };
        }
        Defuzzified {
            strength: (moment / area).clamp(0.0, 1.0),
            degenerate: false,
        }
    }

    /// Strength for a graded "is high" antecedent, read as normal when low
    /// and positive when high.
    pub fn strength_from_high(&self, high: f64) -> Defuzzified {
        let high = high.clamp(0.0, 1.0);
        self.defuzzify(0.0, 1.0 - high, high)
    }

    pub fn strength_from_fv(&self, fv: f64) -> Defuzzified {
        let m = self.fuzzify_fv(fv);
        self.defuzzify(m.dislike, m.normal, m.like)
    }
}
