use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::syntax::{SpecialBase, SpecialConstant};

use super::{j, pair_j, AlphaAssignment, ModelError};

/// Which kind of conjunct of a variant instance fails, in case order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Diagnosis {
    /// Case (i): a `Num` or `Tab` conjunct.
    NumOrTab,
    /// Case (ii): a tilde `Num` or tilde `Tab` conjunct.
    TildeNumOrTab,
    /// Case (iii): a `Sim` or table-similarity conjunct.
    Similarity,
    /// Case (iv): a `Plus` or `Tim` conjunct whose first argument is `S^m(0)`.
    PlusOrTim { m: u64 },
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnosis::NumOrTab => f.write_str("i"),
            Diagnosis::TildeNumOrTab => f.write_str("ii"),
            Diagnosis::Similarity => f.write_str("iii"),
            Diagnosis::PlusOrTim { m } => write!(f, "iv:{m}"),
        }
    }
}

impl FromStr for Diagnosis {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(Diagnosis::NumOrTab),
            "ii" => Ok(Diagnosis::TildeNumOrTab),
            "iii" => Ok(Diagnosis::Similarity),
            _ => s
                .strip_prefix("iv:")
                .and_then(|m| m.parse().ok())
                .map(|m| Diagnosis::PlusOrTim { m })
                .ok_or_else(|| ModelError::BadDiagnosis(s.to_string())),
        }
    }
}

/// Builds the stage-wise interpretation of special constants that falsifies
/// every listed variant at once. Languages not listed keep the value 0.
pub fn construct_alpha(failing: &[(usize, Diagnosis)]) -> Result<AlphaAssignment, ModelError> {
    let mut alpha = AlphaAssignment::new();
    for &(i, diagnosis) in failing {
        if i == 0 {
            return Err(ModelError::ZeroLanguage);
        }
        let c = |base| SpecialConstant::new(base, i);
        let idx = i as u64;
        let zero = BigUint::zero();
        let values = match diagnosis {
            Diagnosis::NumOrTab => [j(1, idx), zero.clone(), zero.clone(), j(4, idx), zero],
            Diagnosis::TildeNumOrTab => [zero.clone(), j(2, idx), j(3, idx), zero, j(4, idx)],
            Diagnosis::Similarity => std::array::from_fn(|_| j(0, 0)),
            Diagnosis::PlusOrTim { m } => {
                let kt = pair_j(&zero, &pair_j(&j(0, 0), &zero));
                [j(0, 0), j(0, 1), j(0, m), j(0, 0), kt]
            }
        };
        for (base, v) in SpecialBase::ALL.into_iter().zip(values) {
            alpha.set(c(base), v);
        }
    }
    Ok(alpha)
}
