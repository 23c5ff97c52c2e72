use serde::{Deserialize, Serialize};

use super::givens::{GivensRotation, GivensSequence};
use super::sampling::circuit_depth;
use super::signed_perm::{signed_permutation_of, SignedPermutation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutationRecord {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

/// One circuit in the JSON exchange format. Clifford circuits carry their
/// signed permutation; `gate_count` and `depth` are optional statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitRecord {
    pub n_modes: usize,
    pub rotations: Vec<GivensRotation>,
    pub terminal_reflection: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signed_permutation: Option<SignedPermutationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl CircuitRecord {
    pub fn from_sequence(seq: &GivensSequence, with_stats: bool) -> Self {
        let signed_permutation = signed_permutation_of(seq).ok().map(|q| SignedPermutationRecord {
            perm: q.perm().to_vec(),
            signs: q.signs().to_vec(),
        });
        Self {
            n_modes: seq.n_modes,
            rotations: seq.rotations.clone(),
            terminal_reflection: seq.terminal_reflection,
            signed_permutation,
            gate_count: with_stats.then(|| seq.len()),
            depth: with_stats.then(|| circuit_depth(seq)),
        }
    }

    /// Validated circuit; a stored signed permutation must agree with the
    /// rotations.
    pub fn to_sequence(&self) -> Result<GivensSequence> {
        let seq = GivensSequence {
            n_modes: self.n_modes,
            rotations: self.rotations.clone(),
            terminal_reflection: self.terminal_reflection,
        };
        seq.validate().map_err(|e| Error::Data(e.to_string()))?;
        if let Some(rec) = &self.signed_permutation {
            let stored = SignedPermutation::new(rec.perm.clone(), rec.signs.clone())
                .map_err(|e| Error::Data(e.to_string()))?;
            let computed = signed_permutation_of(&seq).map_err(|e| Error::Data(e.to_string()))?;
            if stored != computed {
                return Err(Error::Data("stored signed permutation disagrees with the rotations".into()));
            }
        }
        Ok(seq)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit records always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Data(format!("invalid circuit JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn round_trip() {
        let seq = GivensSequence::from_rotations(2, &[(2, FRAC_PI_2), (3, 0.25)]).unwrap();
        let rec = CircuitRecord::from_sequence(&seq, false);
        assert!(rec.signed_permutation.is_none());
        let back = CircuitRecord::from_json(&rec.to_json()).unwrap();
        assert_eq!(back.to_sequence().unwrap(), seq);
    }

    #[test]
    fn clifford_record_carries_permutation() {
        let seq = GivensSequence::from_rotations(1, &[(2, FRAC_PI_2)]).unwrap();
        let rec = CircuitRecord::from_sequence(&seq, true);
        let json = rec.to_json();
        assert!(json.contains("\"signed_permutation\":{\"perm\":[2,1],\"signs\":[-1,1]}"));
        assert!(json.contains("\"gate_count\":1"));
    }

    #[test]
    fn inconsistent_permutation_rejected() {
        let seq = GivensSequence::from_rotations(1, &[(2, FRAC_PI_2)]).unwrap();
        let mut rec = CircuitRecord::from_sequence(&seq, false);
        rec.signed_permutation.as_mut().unwrap().signs = vec![1, 1];
        assert!(matches!(rec.to_sequence(), Err(Error::Data(_))));
    }
}
