use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Every inequality the calculator knows, addressable by a stable name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundKind {
    /// Hoeffding-type, true `H_tau` and empirical `G_hat_tau`.
    #[serde(rename = "hoeffding-simple")]
    HoeffdingSimple,
    /// Hoeffding-type with distributional constants only.
    #[serde(rename = "hoeffding-dist")]
    HoeffdingDistribution,
    /// Fully empirical Hoeffding-type.
    #[serde(rename = "hoeffding-empirical")]
    HoeffdingEmpirical,
    /// DKW-type bound on `sqrt(n) S_tau ||G_hat - G||`.
    #[serde(rename = "dkw-km")]
    DkwKm,
    /// DKW-type bound on `sqrt(n) H_hat_tau ||G_hat - G||`.
    #[serde(rename = "dkw-km-empirical")]
    DkwKmEmpirical,
    /// Union bound of the empirical Hoeffding inequality over `|F|` functions.
    #[serde(rename = "finite-union")]
    FiniteClassUnion,
    /// Uniform over a class, distributional constants.
    #[serde(rename = "class-dist")]
    ClassDistribution,
    /// Uniform over a class, empirical constants.
    #[serde(rename = "class-empirical")]
    ClassEmpirical,
    /// Uniform over a class, true `H_tau` and empirical `G_hat_tau`.
    #[serde(rename = "class-simple-sup")]
    ClassSimpleSup,
    #[serde(rename = "bernstein")]
    Bernstein,
    /// Bernstein-type with `H_hat_tau` and `S_hat_tau` replaced.
    #[serde(rename = "bernstein-dist")]
    BernsteinDistribution,
}

impl BoundKind {
    pub const ALL: [BoundKind; 11] = [
        BoundKind::HoeffdingSimple,
        BoundKind::HoeffdingDistribution,
        BoundKind::HoeffdingEmpirical,
        BoundKind::DkwKm,
        BoundKind::DkwKmEmpirical,
        BoundKind::FiniteClassUnion,
        BoundKind::ClassDistribution,
        BoundKind::ClassEmpirical,
        BoundKind::ClassSimpleSup,
        BoundKind::Bernstein,
        BoundKind::BernsteinDistribution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::HoeffdingSimple => "hoeffding-simple",
            BoundKind::HoeffdingDistribution => "hoeffding-dist",
            BoundKind::HoeffdingEmpirical => "hoeffding-empirical",
            BoundKind::DkwKm => "dkw-km",
            BoundKind::DkwKmEmpirical => "dkw-km-empirical",
            BoundKind::FiniteClassUnion => "finite-union",
            BoundKind::ClassDistribution => "class-dist",
            BoundKind::ClassEmpirical => "class-empirical",
            BoundKind::ClassSimpleSup => "class-simple-sup",
            BoundKind::Bernstein => "bernstein",
            BoundKind::BernsteinDistribution => "bernstein-dist",
        }
    }

    pub fn normalization(self) -> Normalization {
        match self {
            BoundKind::DkwKm | BoundKind::DkwKmEmpirical => Normalization::KmSupNorm,
            BoundKind::FiniteClassUnion
            | BoundKind::ClassDistribution
            | BoundKind::ClassEmpirical
            | BoundKind::ClassSimpleSup => Normalization::ClassSupDeviation,
            _ => Normalization::Deviation,
        }
    }

    /// Whether the threshold scales with the sup bound `M`.
    pub fn uses_m(self) -> bool {
        !matches!(self, BoundKind::DkwKm | BoundKind::DkwKmEmpirical)
    }

    pub fn uses_sigma2(self) -> bool {
        matches!(
            self,
            BoundKind::Bernstein | BoundKind::BernsteinDistribution
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown bound kind `{0}`")]
pub struct UnknownBoundKind(pub alloc::string::String);

impl FromStr for BoundKind {
    type Err = UnknownBoundKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownBoundKind(s.into()))
    }
}

/// What the threshold bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `|mu_hat(f) - mu(f)|`
    Deviation,
    /// `sup_{f in F} |mu_hat(f) - mu(f)|`
    ClassSupDeviation,
    /// `sup_{0 < t <= tau} |G_hat(t-) - G(t-)|`
    KmSupNorm,
}

impl Normalization {
    pub fn describe(self) -> &'static str {
        match self {
            Normalization::Deviation => "|mu_hat(f) - mu(f)|",
            Normalization::ClassSupDeviation => "sup_f |mu_hat(f) - mu(f)|",
            Normalization::KmSupNorm => "sup_{0<t<=tau} |G_hat(t-) - G(t-)|",
        }
    }
}
