//! Transposition circuits in the triangular and brick-wall layouts.

use super::matching::apply_transpositions;
use super::signed_perm::inversion_count;
use crate::error::{domain, Result};

/// Transposition circuit in the triangular layout: row `l = 1..2n-1` holds
/// slots for axes `2..=2n+1-l`, rows executed in order and each row by
/// ascending axis. `rows[l-1][k-2]` is true when the slot applies `τ_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularCircuit {
    size: usize,
    rows: Vec<Vec<bool>>,
}

impl TriangularCircuit {
    /// Empty triangular circuit on `size` (even) wires.
    pub fn empty(size: usize) -> Result<Self> {
        if size == 0 || size % 2 != 0 {
            return domain(format!("wire count {size} is not a positive even number"));
        }
        let rows = (1..size).map(|l| vec![false; size - l]).collect();
        Ok(Self { size, rows })
    }

    pub fn from_rows(size: usize, rows: Vec<Vec<bool>>) -> Result<Self> {
        let template = Self::empty(size)?;
        if rows.len() != template.rows.len()
            || rows.iter().zip(&template.rows).any(|(r, t)| r.len() != t.len())
        {
            return domain("rows do not match the triangular layout");
        }
        Ok(Self { size, rows })
    }

    /// Places a time-ordered list of axes into the earliest matching slots
    /// of the template. Fails when the list is not a subsequence of the
    /// triangular slot order.
    pub fn from_transpositions(size: usize, axes: &[usize]) -> Result<Self> {
        let mut out = Self::empty(size)?;
        let mut it = axes.iter().peekable();
        for row in out.rows.iter_mut() {
            for (slot, used) in row.iter_mut().enumerate() {
                if it.peek().is_some_and(|&&k| k == slot + 2) {
                    *used = true;
                    it.next();
                }
            }
        }
        if let Some(k) = it.next() {
            return domain(format!("axis {k} does not fit the triangular layout"));
        }
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Axes in time order.
    pub fn transpositions(&self) -> Vec<usize> {
        self.rows
            .iter()
            .flat_map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 2))
            .collect()
    }

    pub fn gate_count(&self) -> usize {
        self.rows.iter().flatten().filter(|&&b| b).count()
    }

    /// One-line permutation obtained by applying the circuit to the identity.
    pub fn permutation(&self) -> Vec<usize> {
        apply_transpositions(&self.transpositions(), self.size).expect("axes are in range")
    }
}

/// Transposition circuit in the brick-wall layout: `size` layers, layer `j`
/// (0-based) holding slots for axes `2 + j%2, 4 + j%2, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickWallCircuit {
    size: usize,
    layers: Vec<Vec<bool>>,
}

impl BrickWallCircuit {
    pub fn empty(size: usize) -> Result<Self> {
        if size == 0 || size % 2 != 0 {
            return domain(format!("wire count {size} is not a positive even number"));
        }
        let layers = (0..size).map(|j| vec![false; layer_axes(size, j).len()]).collect();
        Ok(Self { size, layers })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn layers(&self) -> &[Vec<bool>] {
        &self.layers
    }

    pub fn transpositions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, layer) in self.layers.iter().enumerate() {
            let axes = layer_axes(self.size, j);
            out.extend(layer.iter().zip(axes).filter(|(&b, _)| b).map(|(_, k)| k));
        }
        out
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().flatten().filter(|&&b| b).count()
    }

    /// Number of layers containing at least one gate.
    pub fn depth(&self) -> usize {
        self.layers.iter().filter(|l| l.iter().any(|&b| b)).count()
    }

    pub fn permutation(&self) -> Vec<usize> {
        apply_transpositions(&self.transpositions(), self.size).expect("axes are in range")
    }

    /// Brick-wall circuit building `p` with exactly `inversion_count(p)`
    /// transpositions (odd–even transposition sort of `p⁻¹`).
    pub fn for_permutation(p: &[usize]) -> Result<Self> {
        let mut out = Self::empty(p.len())?;
        if !super::signed_perm::is_permutation(p) {
            return domain(format!("{p:?} is not a permutation"));
        }
        let mut inv = vec![0usize; p.len()];
        for (i, &v) in p.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        for j in 0..out.size {
            for (slot, k) in layer_axes(out.size, j).into_iter().enumerate() {
                let i = k - 2;
                if inv[i] > inv[i + 1] {
                    inv.swap(i, i + 1);
                    out.layers[j][slot] = true;
                }
            }
        }
        debug_assert!(inv.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(out.gate_count(), inversion_count(p));
        Ok(out)
    }
}

fn layer_axes(size: usize, j: usize) -> Vec<usize> {
    (2 + j % 2..=size).step_by(2).collect()
}

/// Rewrites a triangular transposition circuit into the brick-wall layout.
/// The permutation is preserved and the gate count never increases.
pub fn brickwall_transform(circuit: &TriangularCircuit) -> BrickWallCircuit {
    BrickWallCircuit::for_permutation(&circuit.permutation()).expect("triangular circuits realize permutations")
}

/// Solves `τ_i^{b1} τ_{i+1}^{b2} τ_i^{b3} = τ_{i+1}^{c1} τ_i^{c2} τ_{i+1}^{c3}`
/// for the `(c1, c2, c3)` with the fewest transpositions.
pub fn braid_rewrite(b1: bool, b2: bool, b3: bool) -> (bool, bool, bool) {
    let word = |bits: [(bool, usize); 3]| {
        let axes: Vec<usize> = bits.iter().filter(|(b, _)| *b).map(|&(_, k)| k).collect();
        apply_transpositions(&axes, 3).expect("axes 2 and 3 fit three wires")
    };
    let target = word([(b1, 2), (b2, 3), (b3, 2)]);
    let mut best: Option<((bool, bool, bool), usize)> = None;
    for code in 0..8u8 {
        let c = (code & 1 != 0, code & 2 != 0, code & 4 != 0);
        if word([(c.0, 3), (c.1, 2), (c.2, 3)]) == target {
            let cost = c.0 as usize + c.1 as usize + c.2 as usize;
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((c, cost));
            }
        }
    }
    best.expect("both words generate the symmetric group on three letters").0
}
