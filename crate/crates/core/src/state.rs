//! Dense state-vector simulation of matchgate circuits.

use std::path::Path;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensembles::{cos_sin, GivensRotation, GivensSequence};
use crate::error::{domain, Error, Result};
use crate::majorana::{i_pow, monomial_to_pauli, Bitstring, MajoranaMonomial, PauliString};

/// Largest register a state vector may hold.
pub const MAX_STATE_QUBITS: usize = 26;

/// Norm deviation tolerated (and corrected) when loading amplitudes.
pub const LOAD_NORM_TOL: f64 = 1e-6;

/// Pure state on `n` qubits; amplitude index uses qubit 1 as the top bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Computational basis state `|z⟩`.
    pub fn basis(z: Bitstring) -> Result<Self> {
        let n = z.len();
        check_size(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[z.index() as usize] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    /// Haar-random pure state (normalized complex Gaussian vector).
    pub fn random_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_size(n)?;
        let mut amps: Vec<C64> = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits: n, amps })
    }

    /// State from raw amplitudes. Renormalizes when the norm is within
    /// [`LOAD_NORM_TOL`] of one and rejects it otherwise.
    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_size(n).map_err(|e| Error::Data(e.to_string()))?;
        if amps.len() != 1 << n {
            return Err(Error::Data(format!(
                "expected {} amplitudes for {n} qubits, found {}",
                1usize << n,
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Data("amplitudes must be finite".into()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() >= LOAD_NORM_TOL {
            return Err(Error::Data(format!("state norm {norm} deviates from 1 by more than {LOAD_NORM_TOL:e}")));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits: n, amps })
    }

    /// Parses the text format: a header line `nqubits N` followed by `2^N`
    /// lines `re im` in index order. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Data("empty state file".into()))?;
        let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["nqubits", v] => v.parse().map_err(|_| Error::Data(format!("invalid qubit count '{v}'")))?,
            _ => return Err(Error::Data(format!("expected header 'nqubits N', found '{header}'"))),
        };
        let mut amps = Vec::new();
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Data(format!("line {}: invalid number '{s}'", lineno + 1)))
            };
            match parts.as_slice() {
                [re, im] => amps.push(C64::new(parse(re)?, parse(im)?)),
                _ => return Err(Error::Data(format!("line {}: expected 're im'", lineno + 1))),
            }
        }
        Self::from_amplitudes(n, amps)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("cannot read state file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Text form accepted by [`StateVector::parse`], 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("nqubits {}\n", self.n_qubits);
        for a in &self.amps {
            s.push_str(&format!("{:.16e} {:.16e}\n", a.re, a.im));
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `G_k(θ) = exp(-iθ/2 · P)` with `P = Z_q` for the pair
    /// `(2q-1, 2q)` and `P = X_q X_{q+1}` for `(2q, 2q+1)`.
    pub fn apply_givens(&mut self, r: &GivensRotation) -> Result<()> {
        if r.axis < 2 || r.axis > 2 * self.n_qubits {
            return domain(format!("axis {} outside 2..={}", r.axis, 2 * self.n_qubits));
        }
        let (c, s) = cos_sin(r.angle / 2.0);
        let n = self.n_qubits;
        match r.qubits() {
            (q, None) => {
                let bit = 1usize << (n - q);
                let down = C64::new(c, -s);
                let up = C64::new(c, s);
                for (b, a) in self.amps.iter_mut().enumerate() {
                    *a *= if b & bit == 0 { down } else { up };
                }
            }
            (q, Some(q2)) => {
                let mask = (1usize << (n - q)) | (1usize << (n - q2));
                let low = 1usize << (n - q2);
                let mis = C64::new(0.0, -s);
                for b in 0..self.amps.len() {
                    // Visit each pair once, from the member with qubit q2 = 0.
                    if b & low != 0 {
                        continue;
                    }
                    let b2 = b ^ mask;
                    let (x, y) = (self.amps[b], self.amps[b2]);
                    self.amps[b] = x * c + y * mis;
                    self.amps[b2] = y * c + x * mis;
                }
            }
        }
        Ok(())
    }

    /// Applies a Pauli string (including its phase).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return domain("Pauli string acts on a different qubit count");
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let (e, b2) = p.apply_to_basis(b);
            out[b2] = i_pow(e) * a;
        }
        self.amps = out;
        Ok(())
    }

    /// Applies the circuit in time order, then `X_n` if the reflection flag
    /// is set.
    pub fn apply_sequence(&mut self, seq: &GivensSequence) -> Result<()> {
        if seq.n_modes != self.n_qubits {
            return domain(format!(
                "circuit on {} modes applied to {} qubits",
                seq.n_modes, self.n_qubits
            ));
        }
        for r in &seq.rotations {
            self.apply_givens(r)?;
        }
        if seq.terminal_reflection {
            for b in (0..self.amps.len()).step_by(2) {
                self.amps.swap(b, b + 1);
            }
        }
        Ok(())
    }

    /// Draws a computational-basis outcome with probability `|ψ_z|²`.
    pub fn born_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Bitstring> {
        let norm2: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-8 {
            return Err(Error::Internal(format!("state norm² {norm2} is not 1")));
        }
        let u = rng.random::<f64>() * norm2;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (b, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = b;
            }
            acc += p;
            if u < acc {
                return Bitstring::new(self.n_qubits, b as u64);
            }
        }
        Bitstring::new(self.n_qubits, last_nonzero as u64)
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn pauli_expectation(&self, p: &PauliString) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (b, a) in self.amps.iter().enumerate() {
            let (e, b2) = p.apply_to_basis(b);
            acc += self.amps[b2].conj() * i_pow(e) * a;
        }
        acc
    }

    /// `⟨ψ|γ_μ|ψ⟩ = tr(γ_μ ρ)`.
    pub fn majorana_expectation(&self, m: &MajoranaMonomial) -> Result<C64> {
        if m.n_modes() != self.n_qubits {
            return domain("monomial acts on a different mode count");
        }
        Ok(self.pauli_expectation(&monomial_to_pauli(m)))
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATE_QUBITS {
        return domain(format!("qubit count {n} outside 1..={MAX_STATE_QUBITS}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn zero_angle_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = StateVector::random_haar(3, &mut rng).unwrap();
        let mut phi = psi.clone();
        for axis in 2..=6 {
            phi.apply_givens(&GivensRotation::new(axis, 0.0, 3).unwrap()).unwrap();
        }
        assert_eq!(phi, psi);
    }

    #[test]
    fn z_rotation_by_pi_flips_plus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = StateVector::from_amplitudes(1, vec![C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        psi.apply_givens(&GivensRotation::new(2, PI, 1).unwrap()).unwrap();
        // exp(-iπ/2 Z)|+⟩ = -i|−⟩
        let a = psi.amplitudes();
        assert!((a[0] - C64::new(0.0, -h)).norm() < 1e-15);
        assert!((a[1] - C64::new(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn basis_state_sampling() {
        let z = Bitstring::from_bits(&[0, 1]).unwrap();
        let psi = StateVector::basis(z).unwrap();
        assert_eq!(psi.amplitudes()[1], C64::new(1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            assert_eq!(psi.born_sample(&mut rng).unwrap(), z);
        }
    }

    #[test]
    fn file_round_trip() {
        let psi = StateVector::basis(Bitstring::zeros(2)).unwrap();
        let back = StateVector::parse(&psi.to_text()).unwrap();
        assert_eq!(back, psi);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(StateVector::parse("nqubits 1\n1 0\n"), Err(Error::Data(_))));
        assert!(matches!(StateVector::parse("nqubits 1\n0.5 0\n0 0\n"), Err(Error::Data(_))));
        assert!(matches!(StateVector::parse("qubits 1\n1 0\n0 0\n"), Err(Error::Data(_))));
        assert!(matches!(StateVector::parse("nqubits 1\n1 x\n0 0\n"), Err(Error::Data(_))));
        let near = StateVector::parse("nqubits 1\n1.0000001 0\n0 0\n").unwrap();
        assert!((near.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reflection_is_x_on_last_qubit() {
        let mut psi = StateVector::basis(Bitstring::from_bits(&[1, 0]).unwrap()).unwrap();
        let mut seq = GivensSequence::new(2).unwrap();
        seq.terminal_reflection = true;
        psi.apply_sequence(&seq).unwrap();
        assert_eq!(psi.amplitudes()[3], C64::new(1.0, 0.0));
    }
}
