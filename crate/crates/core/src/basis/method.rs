use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MomentError, Result};

/// Moment family. The first twelve are the classical families, the last five
/// are the fractional-order generalisations obtained by `r := r^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Zm,
    Pzm,
    Ofmm,
    Chfm,
    Pjfm,
    Jfm,
    Rhfm,
    Efm,
    Pcet,
    Pct,
    Pst,
    Bfm,
    Fjfm,
    Grhfm,
    Gpcet,
    Gpct,
    Gpst,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::Zm,
        Family::Pzm,
        Family::Ofmm,
        Family::Chfm,
        Family::Pjfm,
        Family::Jfm,
        Family::Rhfm,
        Family::Efm,
        Family::Pcet,
        Family::Pct,
        Family::Pst,
        Family::Bfm,
        Family::Fjfm,
        Family::Grhfm,
        Family::Gpcet,
        Family::Gpct,
        Family::Gpst,
    ];

    pub const CLASSICAL: [Family; 12] = [
        Family::Zm,
        Family::Pzm,
        Family::Ofmm,
        Family::Chfm,
        Family::Pjfm,
        Family::Jfm,
        Family::Rhfm,
        Family::Efm,
        Family::Pcet,
        Family::Pct,
        Family::Pst,
        Family::Bfm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Zm => "ZM",
            Family::Pzm => "PZM",
            Family::Ofmm => "OFMM",
            Family::Chfm => "CHFM",
            Family::Pjfm => "PJFM",
            Family::Jfm => "JFM",
            Family::Rhfm => "RHFM",
            Family::Efm => "EFM",
            Family::Pcet => "PCET",
            Family::Pct => "PCT",
            Family::Pst => "PST",
            Family::Bfm => "BFM",
            Family::Fjfm => "FJFM",
            Family::Grhfm => "GRHFM",
            Family::Gpcet => "GPCET",
            Family::Gpct => "GPCT",
            Family::Gpst => "GPST",
        }
    }

    pub fn is_fractional(self) -> bool {
        matches!(
            self,
            Family::Fjfm | Family::Grhfm | Family::Gpcet | Family::Gpct | Family::Gpst
        )
    }

    /// Classical family underlying a fractional one (identity otherwise).
    pub fn base(self) -> Family {
        match self {
            Family::Fjfm => Family::Jfm,
            Family::Grhfm => Family::Rhfm,
            Family::Gpcet => Family::Efm,
            Family::Gpct => Family::Pct,
            Family::Gpst => Family::Pst,
            f => f,
        }
    }

    /// Radial kernel built on Jacobi polynomials.
    pub fn is_jacobi(self) -> bool {
        matches!(
            self.base(),
            Family::Zm | Family::Pzm | Family::Ofmm | Family::Chfm | Family::Pjfm | Family::Jfm
        )
    }

    /// Radial kernel built on harmonic functions (FFT-capable).
    pub fn is_harmonic(self) -> bool {
        matches!(
            self.base(),
            Family::Rhfm | Family::Efm | Family::Pcet | Family::Pct | Family::Pst
        )
    }

    /// Complex-valued radial kernel.
    pub fn has_complex_radial(self) -> bool {
        matches!(self.base(), Family::Efm | Family::Pcet)
    }

    /// The radial kernel depends on the repetition `m` as well as `n`.
    pub fn radial_depends_on_m(self) -> bool {
        matches!(self, Family::Zm | Family::Pzm)
    }

    pub fn has_jacobi_params(self) -> bool {
        matches!(self, Family::Jfm | Family::Fjfm)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = MomentError;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == up)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name().to_lowercase()).collect();
                MomentError::InvalidParameter(format!(
                    "unknown method '{s}', expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

/// A moment family together with its parameters.
///
/// Construction validates the parameters, so a `MethodSpec` in hand is always
/// usable: Jacobi parameters satisfy `p - q > -1`, `q > 0`; the fractional
/// parameter is positive; the Bessel order is finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MethodSpecRepr", into = "MethodSpecRepr")]
pub struct MethodSpec {
    family: Family,
    p: f64,
    q: f64,
    alpha: f64,
    bessel_order: f64,
}

pub const DEFAULT_JACOBI_P: f64 = 3.0;
pub const DEFAULT_JACOBI_Q: f64 = 3.0;
pub const DEFAULT_BESSEL_ORDER: f64 = 1.0;

impl MethodSpec {
    /// Family with default parameters: JFM/FJFM p = q = 3, alpha = 1,
    /// Bessel order 1.
    pub fn new(family: Family) -> Result<Self> {
        Self::build(family, DEFAULT_JACOBI_P, DEFAULT_JACOBI_Q, 1.0, DEFAULT_BESSEL_ORDER)
    }

    pub fn jfm(p: f64, q: f64) -> Result<Self> {
        Self::build(Family::Jfm, p, q, 1.0, DEFAULT_BESSEL_ORDER)
    }

    pub fn fjfm(p: f64, q: f64, alpha: f64) -> Result<Self> {
        Self::build(Family::Fjfm, p, q, alpha, DEFAULT_BESSEL_ORDER)
    }

    /// A fractional family (`GRHFM`, `GPCET`, `GPCT`, `GPST`, `FJFM`) at `alpha`.
    pub fn fractional(family: Family, alpha: f64) -> Result<Self> {
        if !family.is_fractional() {
            return Err(MomentError::InvalidParameter(format!(
                "{family} has no fractional parameter"
            )));
        }
        Self::build(family, DEFAULT_JACOBI_P, DEFAULT_JACOBI_Q, alpha, DEFAULT_BESSEL_ORDER)
    }

    pub fn bfm(bessel_order: f64) -> Result<Self> {
        Self::build(Family::Bfm, DEFAULT_JACOBI_P, DEFAULT_JACOBI_Q, 1.0, bessel_order)
    }

    pub fn build(family: Family, p: f64, q: f64, alpha: f64, bessel_order: f64) -> Result<Self> {
        let spec = MethodSpec {
            family,
            p: if family.has_jacobi_params() { p } else { DEFAULT_JACOBI_P },
            q: if family.has_jacobi_params() { q } else { DEFAULT_JACOBI_Q },
            alpha: if family.is_fractional() { alpha } else { 1.0 },
            bessel_order: if family == Family::Bfm {
                bessel_order
            } else {
                DEFAULT_BESSEL_ORDER
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.family.has_jacobi_params() {
            if !(self.p.is_finite() && self.q.is_finite()) {
                return Err(MomentError::InvalidParameter("p and q must be finite".into()));
            }
            if !(self.p - self.q > -1.0 && self.q > 0.0) {
                return Err(MomentError::InvalidParameter(format!(
                    "Jacobi parameters require p - q > -1 and q > 0 (got p={}, q={})",
                    self.p, self.q
                )));
            }
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(MomentError::InvalidParameter(format!(
                "fractional parameter alpha must be > 0 (got {})",
                self.alpha
            )));
        }
        if !(self.bessel_order.is_finite() && self.bessel_order >= 0.0) {
            return Err(MomentError::InvalidParameter(format!(
                "Bessel order must be finite and >= 0 (got {})",
                self.bessel_order
            )));
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn bessel_order(&self) -> f64 {
        self.bessel_order
    }

    /// The classical method this one reduces to at `alpha = 1`.
    pub fn base(&self) -> MethodSpec {
        MethodSpec {
            family: self.family.base(),
            alpha: 1.0,
            ..*self
        }
    }

    /// Short human-readable label, e.g. `ZM`, `JFM(3,3)`, `GPCET(2)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Jfm => format!("JFM({},{})", self.p, self.q),
            Family::Fjfm => format!("FJFM({},{},{})", self.p, self.q, self.alpha),
            Family::Bfm if self.bessel_order != DEFAULT_BESSEL_ORDER => {
                format!("BFM(v={})", self.bessel_order)
            }
            f if f.is_fractional() => format!("{}({})", f.name(), self.alpha),
            f => f.name().to_string(),
        }
    }

    /// Parameter string used in report rows.
    pub fn params(&self) -> String {
        let mut parts = Vec::new();
        if self.family.has_jacobi_params() {
            parts.push(format!("p={}", self.p));
            parts.push(format!("q={}", self.q));
        }
        if self.family.is_fractional() {
            parts.push(format!("alpha={}", self.alpha));
        }
        if self.family == Family::Bfm {
            parts.push(format!("v={}", self.bessel_order));
        }
        parts.join(";")
    }

    /// Whether `(n, m)` is a legal index for this family, regardless of `K`.
    pub fn is_legal(&self, n: i32, m: i32) -> bool {
        let am = m.unsigned_abs() as i32;
        match self.family {
            Family::Zm => n >= 0 && am <= n && (n - am) % 2 == 0,
            Family::Pzm => n >= 0 && am <= n,
            Family::Efm | Family::Pcet | Family::Gpcet => true,
            Family::Pst | Family::Gpst => n >= 1,
            _ => n >= 0,
        }
    }

    pub(crate) fn check_order(&self, n: i32, m: i32) -> Result<()> {
        if self.is_legal(n, m) {
            Ok(())
        } else {
            Err(MomentError::IllegalOrder {
                family: self.label(),
                n,
                m,
            })
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
struct MethodSpecRepr {
    family: Family,
    #[serde(default = "default_p")]
    p: f64,
    #[serde(default = "default_q")]
    q: f64,
    #[serde(default = "default_one")]
    alpha: f64,
    #[serde(default = "default_one")]
    bessel_order: f64,
}

fn default_p() -> f64 {
    DEFAULT_JACOBI_P
}
fn default_q() -> f64 {
    DEFAULT_JACOBI_Q
}
fn default_one() -> f64 {
    1.0
}

impl TryFrom<MethodSpecRepr> for MethodSpec {
    type Error = MomentError;

    fn try_from(r: MethodSpecRepr) -> Result<Self> {
        MethodSpec::build(r.family, r.p, r.q, r.alpha, r.bessel_order)
    }
}

impl From<MethodSpec> for MethodSpecRepr {
    fn from(m: MethodSpec) -> Self {
        MethodSpecRepr {
            family: m.family,
            p: m.p,
            q: m.q,
            alpha: m.alpha,
            bessel_order: m.bessel_order,
        }
    }
}
