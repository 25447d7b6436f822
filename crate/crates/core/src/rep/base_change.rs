//! Reduction of integral representations to a field.

use std::sync::Arc;

use super::{RepError, ZRep};
use crate::quiver::Quiver;
use crate::zlinalg::{mat_mul, quotient, rank, reduce, Field, Matrix};

/// A representation over a field `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldRep<F: Field> {
    pub field: F,
    pub quiver: Arc<Quiver>,
    pub dims: Vec<usize>,
    pub actions: Vec<Matrix<F::Elem>>,
}

/// `M ⊗_ℤ F`. Each vertex group becomes `F^g / im R̄`; relations that vanish
/// mod `p` leave extra dimensions (so `ℤ/p ⊗ 𝔽_p = 𝔽_p`).
pub fn base_change<F: Field>(m: &ZRep, field: &F) -> FieldRep<F> {
    let q = m.quiver();
    let quotients: Vec<_> = m
        .vertices()
        .iter()
        .map(|g| quotient(field, g.generators, &reduce(field, &g.relations)))
        .collect();
    let dims = quotients.iter().map(|(pi, _)| pi.rows()).collect();
    let actions = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let act = reduce(field, m.action(k));
            mat_mul(field, &mat_mul(field, &quotients[a.target].0, &act), &quotients[a.source].1)
        })
        .collect();
    FieldRep { field: field.clone(), quiver: m.quiver_arc().clone(), dims, actions }
}

impl<F: Field> FieldRep<F> {
    /// `dim Hom` and `dim Ext¹` against another representation over the same
    /// field, from the rank of the intertwining map.
    pub fn hom_ext_dims(&self, other: &FieldRep<F>) -> Result<(usize, usize), RepError> {
        if *self.quiver != *other.quiver {
            return Err(RepError::QuiverMismatch);
        }
        let f = &self.field;
        let arrows = self.quiver.arrows();
        let mut var_off = Vec::new();
        let mut total = 0;
        for v in 0..self.dims.len() {
            var_off.push(total);
            total += other.dims[v] * self.dims[v];
        }
        let mut rows = 0;
        let mut row_off = Vec::new();
        for a in arrows {
            row_off.push(rows);
            rows += other.dims[a.target] * self.dims[a.source];
        }
        let mut delta = Matrix::from_fn(rows, total, |_, _| f.zero());
        for (k, a) in arrows.iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let (ms, nt) = (self.dims[s], other.dims[t]);
            // (f_t M_a)[i][j] = Σ_l f_t[i][l] M_a[l][j]
            for i in 0..nt {
                for j in 0..ms {
                    let row = row_off[k] + i * ms + j;
                    for l in 0..self.dims[t] {
                        let col = var_off[t] + i * self.dims[t] + l;
                        delta[(row, col)] = f.add(&delta[(row, col)], &self.actions[k][(l, j)]);
                    }
                    for l in 0..other.dims[s] {
                        let col = var_off[s] + l * ms + j;
                        delta[(row, col)] = f.sub(&delta[(row, col)], &other.actions[k][(i, l)]);
                    }
                }
            }
        }
        let r = rank(f, &delta);
        Ok((total - r, rows - r))
    }
}

/// `(dim Hom, dim Ext¹)` of `M ⊗ F` and `N ⊗ F`.
pub fn field_hom_ext_dims<F: Field>(m: &ZRep, n: &ZRep, field: &F) -> Result<(usize, usize), RepError> {
    m.same_quiver(n)?;
    base_change(m, field).hom_ext_dims(&base_change(n, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::{PrimeField, Rationals};

    #[test]
    fn torsion_example_by_characteristic() {
        let m = ZRep::torsion_example();
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(base_change(&m, &f2).dims, vec![1, 0]);
        assert_eq!(base_change(&m, &f3).dims, vec![0, 0]);
        assert_eq!(base_change(&m, &Rationals).dims, vec![0, 0]);
    }

    #[test]
    fn kronecker_simple_dims() {
        let q = Arc::new(Quiver::kronecker());
        let s1 = ZRep::simple(q.clone(), 0);
        let s2 = ZRep::simple(q, 1);
        assert_eq!(field_hom_ext_dims(&s1, &s2, &Rationals).unwrap(), (0, 2));
        assert_eq!(field_hom_ext_dims(&s1, &s1, &PrimeField::new(5).unwrap()).unwrap(), (1, 0));
    }
}
