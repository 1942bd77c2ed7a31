//! Radial potentials on `(0, 1]` and the half-line potential `Q(t)`.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::sphere_area;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Nearest,
    #[default]
    Linear,
}

/// A radial profile `q₀(r)`, `r ∈ (0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RadialPotential {
    /// Value `values[k]` on the cell `(breaks[k−1], breaks[k]]`, `breaks[−1] = 0`.
    #[serde(rename = "piecewise")]
    PiecewiseConstant { breaks: Vec<f64>, values: Vec<f64> },
    /// `amp·cos(2π·freq·r) + offset`.
    Cosine { amp: f64, freq: f64, offset: f64 },
    /// Interpolated samples; constant extrapolation outside the node range.
    Sampled {
        r: Vec<f64>,
        v: Vec<f64>,
        #[serde(default)]
        interp: Interp,
    },
    /// `base(r) + shift`.
    Shifted { base: Box<RadialPotential>, shift: f64 },
}

impl RadialPotential {
    pub fn constant(c: f64) -> Self {
        RadialPotential::PiecewiseConstant { breaks: vec![1.0], values: vec![c] }
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let q = RadialPotential::PiecewiseConstant { breaks, values };
        q.validate()?;
        Ok(q)
    }

    pub fn cosine(amp: f64, freq: f64, offset: f64) -> Self {
        RadialPotential::Cosine { amp, freq, offset }
    }

    pub fn sampled(r: Vec<f64>, v: Vec<f64>, interp: Interp) -> Result<Self> {
        let q = RadialPotential::Sampled { r, v, interp };
        q.validate()?;
        Ok(q)
    }

    pub fn shifted(self, shift: f64) -> Self {
        RadialPotential::Shifted { base: Box::new(self), shift }
    }

    /// Check structural invariants (needed after deserialization).
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            RadialPotential::PiecewiseConstant { breaks, values } => {
                if breaks.is_empty() || breaks.len() != values.len() {
                    return Err(Error::Invalid(
                        "piecewise potential needs one value per break".into(),
                    ));
                }
                if !finite(breaks) || !finite(values) {
                    return Err(Error::Invalid("non-finite piecewise data".into()));
                }
                if breaks[0] <= 0.0 || breaks.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Invalid("breaks must increase within (0, 1]".into()));
                }
                if (breaks[breaks.len() - 1] - 1.0).abs() > 1e-12 {
                    return Err(Error::Invalid("last break must be 1".into()));
                }
            }
            RadialPotential::Cosine { amp, freq, offset } => {
                if !finite(&[*amp, *freq, *offset]) {
                    return Err(Error::Invalid("non-finite cosine parameters".into()));
                }
            }
            RadialPotential::Sampled { r, v, .. } => {
                if r.is_empty() || r.len() != v.len() {
                    return Err(Error::Invalid("sampled potential needs matching r and v".into()));
                }
                if !finite(r) || !finite(v) {
                    return Err(Error::Invalid("non-finite samples".into()));
                }
                if r[0] <= 0.0 || r[r.len() - 1] > 1.0 || r.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Invalid("sample radii must increase within (0, 1]".into()));
                }
            }
            RadialPotential::Shifted { base, shift } => {
                if !shift.is_finite() {
                    return Err(Error::Invalid("non-finite shift".into()));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// `q₀(r)` for `r ∈ (0, 1]`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Domain(format!("radius {r} outside (0, 1]")));
        }
        Ok(self.value(r))
    }

    /// Unchecked evaluation; radii outside `(0, 1]` are clamped by the variants' extension rules.
    pub fn value(&self, r: f64) -> f64 {
        match self {
            RadialPotential::PiecewiseConstant { breaks, values } => {
                let k = breaks.partition_point(|&b| b < r);
                values[k.min(values.len() - 1)]
            }
            RadialPotential::Cosine { amp, freq, offset } => {
                amp * (2.0 * std::f64::consts::PI * freq * r).cos() + offset
            }
            RadialPotential::Sampled { r: rs, v, interp } => {
                let n = rs.len();
                if r <= rs[0] {
                    return v[0];
                }
                if r >= rs[n - 1] {
                    return v[n - 1];
                }
                let k = rs.partition_point(|&x| x < r);
                let (r0, r1, v0, v1) = (rs[k - 1], rs[k], v[k - 1], v[k]);
                match interp {
                    Interp::Linear => v0 + (v1 - v0) * (r - r0) / (r1 - r0),
                    Interp::Nearest => {
                        if r - r0 <= r1 - r {
                            v0
                        } else {
                            v1
                        }
                    }
                }
            }
            RadialPotential::Shifted { base, shift } => base.value(r) + shift,
        }
    }

    /// Interior radii in `(0, 1)` where the profile (or its derivative) may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialPotential::PiecewiseConstant { breaks, .. } => {
                breaks.iter().copied().filter(|&b| b < 1.0).collect()
            }
            RadialPotential::Cosine { .. } => Vec::new(),
            RadialPotential::Sampled { r, v, interp } => match interp {
                Interp::Linear => r.iter().copied().filter(|&x| x < 1.0).collect(),
                Interp::Nearest => r
                    .windows(2)
                    .zip(v.windows(2))
                    .filter(|(_, w)| w[0] != w[1])
                    .map(|(x, _)| 0.5 * (x[0] + x[1]))
                    .collect(),
            },
            RadialPotential::Shifted { base, .. } => base.breakpoints(),
        }
    }

    /// Cell edges `0 = e₀ < … < e_K = 1` such that the profile is smooth inside each cell.
    pub fn cell_edges(&self) -> Vec<f64> {
        let mut e = vec![0.0];
        e.extend(self.breakpoints());
        e.push(1.0);
        e.dedup();
        e
    }

    /// `(inf q, sup q)` over `(0, 1]`.
    pub fn range(&self) -> (f64, f64) {
        match self {
            RadialPotential::PiecewiseConstant { values, .. }
            | RadialPotential::Sampled { v: values, .. } => {
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            RadialPotential::Cosine { amp, freq, offset } => {
                let span = 2.0 * std::f64::consts::PI * freq.abs();
                let cmin = if span >= std::f64::consts::PI { -1.0 } else { span.cos() };
                let (a, b) = (amp * cmin, *amp);
                (offset + a.min(b), offset + a.max(b))
            }
            RadialPotential::Shifted { base, shift } => {
                let (lo, hi) = base.range();
                (lo + shift, hi + shift)
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        let (lo, hi) = self.range();
        lo.abs().max(hi.abs())
    }

    /// `q₀(1⁻)`.
    pub fn boundary_value(&self) -> f64 {
        self.value(1.0)
    }

    pub fn to_halfline(&self, kappa: f64) -> HalfLinePotential {
        HalfLinePotential { source: self.clone(), kappa }
    }
}

/// `Q(t) = e^{−2t}(q₀(e^{−t}) − κ)` on `t ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLinePotential {
    pub source: RadialPotential,
    pub kappa: f64,
}

impl HalfLinePotential {
    pub fn eval(&self, t: f64) -> f64 {
        let r = (-t).exp();
        r * r * (self.source.value(r) - self.kappa)
    }

    /// Breakpoints `t = −ln r_k` in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.source.breakpoints().iter().map(|r| -r.ln()).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts
    }

    /// `∫₀^T |Q(t)| dt`.
    pub fn l1_norm(&self, t_max: f64) -> Result<f64> {
        let mut edges = vec![0.0];
        edges.extend(self.breakpoints().into_iter().filter(|&t| t < t_max));
        edges.push(t_max);
        Ok(quad::adaptive_cells(|t| self.eval(t).abs(), &edges, 1e-13, 1e-12)?.value)
    }
}

/// `∫_{b<|x|<1} |qa − qb| dx` in dimension `d`.
pub fn l1_annulus(qa: &RadialPotential, qb: &RadialPotential, b: f64, d: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&b) {
        return Err(Error::Domain(format!("inner radius {b} outside [0, 1)")));
    }
    let mut edges = vec![b];
    edges.extend(qa.breakpoints().into_iter().chain(qb.breakpoints()).filter(|&x| x > b));
    edges.push(1.0);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();
    let p = d as i32 - 1;
    let f = |r: f64| (qa.value(r) - qb.value(r)).abs() * r.powi(p);
    let v = quad::adaptive_cells(f, &edges, 1e-14, 1e-12)?;
    Ok(sphere_area(d) * v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fig1() -> RadialPotential {
        RadialPotential::piecewise(vec![1.0 / 3.0, 2.0 / 3.0, 1.0], vec![2.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(fig1().evaluate(0.5).unwrap(), 1.0);
        assert_eq!(fig1().evaluate(0.2).unwrap(), 2.0);
        assert_eq!(fig1().evaluate(1.0).unwrap(), 2.0);
        let c = RadialPotential::cosine(1.0, 2.0, -5.0);
        assert!((c.evaluate(0.25).unwrap() + 6.0).abs() < 1e-15);
        let s = fig1().shifted(0.0);
        for r in [0.1, 0.4, 0.9] {
            assert_eq!(s.evaluate(r).unwrap(), fig1().evaluate(r).unwrap());
        }
        assert!(fig1().evaluate(0.0).is_err());
        assert!(fig1().evaluate(1.1).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(fig1().range(), (1.0, 2.0));
        let (lo, hi) = RadialPotential::cosine(1.0, 2.0, -5.0).range();
        assert_eq!((lo, hi), (-6.0, -4.0));
        let (lo, hi) = RadialPotential::cosine(1.0, 0.25, 0.0).range();
        assert!(lo.abs() < 1e-15 && hi == 1.0);
    }

    #[test]
    fn halfline_examples() {
        let q = RadialPotential::constant(0.7);
        assert_eq!(q.to_halfline(0.7).eval(3.0), 0.0);
        let q0 = RadialPotential::constant(0.0).to_halfline(-1.0);
        for t in [0.0, 0.5, 2.0] {
            assert!((q0.eval(t) - (-2.0 * t).exp()).abs() < 1e-15);
        }
        let qf = fig1().to_halfline(0.0);
        assert!((qf.eval(2f64.ln()) - 0.25).abs() < 1e-15);
        assert!(qf.l1_norm(40.0).unwrap().is_finite());
    }

    #[test]
    fn l1_examples() {
        let one = RadialPotential::constant(1.0);
        let zero = RadialPotential::constant(0.0);
        assert_eq!(l1_annulus(&fig1(), &fig1(), 0.0, 3).unwrap(), 0.0);
        assert!((l1_annulus(&one, &zero, 0.0, 3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        let v = l1_annulus(&fig1(), &RadialPotential::constant(2.0), 0.0, 3).unwrap();
        assert!((v - 4.0 * PI / 3.0 * 7.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn json_schema_round_trip() {
        let q: RadialPotential = serde_json_from(
            r#"{"type":"shifted","base":{"type":"piecewise","breaks":[0.5,1.0],"values":[1,2]},"shift":-1}"#,
        );
        assert_eq!(q.evaluate(0.75).unwrap(), 1.0);
        assert!(serde_json_try(r#"{"type":"cosine","amp":1,"freq":2,"offset":0,"extra":1}"#).is_err());
        let s: RadialPotential = serde_json_from(r#"{"type":"sampled","r":[0.5,1.0],"v":[0,1]}"#);
        assert!((s.evaluate(0.75).unwrap() - 0.5).abs() < 1e-15);
    }

    fn serde_json_try(s: &str) -> serde_json::Result<RadialPotential> {
        serde_json::from_str(s)
    }

    fn serde_json_from(s: &str) -> RadialPotential {
        serde_json_try(s).unwrap()
    }
}
