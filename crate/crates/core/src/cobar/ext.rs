//! Cohomology of cobar complexes: Ext groups with stable class names.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use super::complex::{CobarComplex, ComplexTag};
use crate::error::{CoreError, Result};
use crate::linalg::{kernel_of_columns, subquotient_basis, Echelon, SparseVector};

/// A basis class of an Ext group with a cocycle representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtClass {
    pub tag: ComplexTag,
    pub s: u32,
    pub t: u32,
    pub index: usize,
    /// Block of the representative (exterior count for `A_*`, 0 otherwise).
    pub block: u32,
    pub representative: SparseVector,
}

impl ExtClass {
    /// Canonical name, e.g. `adams(2,12)#0`.
    pub fn name(&self) -> String {
        format!("{}({},{})#{}", self.tag, self.s, self.t, self.index)
    }
}

/// `Ext^{s,t}` of a complex: class representatives plus the data needed to
/// express any cocycle in the class basis.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub tag: ComplexTag,
    pub s: u32,
    pub t: u32,
    classes: Vec<ExtClass>,
    /// Boundaries (zero tags) followed by class representatives (unit tags).
    reducer: Echelon<SparseVector>,
}

impl ExtGroup {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ExtClass] {
        &self.classes
    }

    /// Coordinates of the class of the cocycle `z` in the class basis.
    pub fn coordinates(&self, z: &SparseVector) -> Result<SparseVector> {
        let mut v = z.clone();
        let mut tag = SparseVector::zero();
        self.reducer.reduce_leading(&mut v, &mut tag);
        if !v.is_zero() {
            return Err(CoreError::InconsistentComplex(format!(
                "{} ({},{}): cochain is not a cocycle",
                self.tag, self.s, self.t
            )));
        }
        tag.scale(self.reducer.prime().value() - 1, self.reducer.prime());
        Ok(tag)
    }

    /// Whether the cocycle `z` is a coboundary.
    pub fn is_boundary(&self, z: &SparseVector) -> Result<bool> {
        Ok(self.coordinates(z)?.is_zero())
    }
}

impl CobarComplex {
    /// `Ext^{s,t}`: kernel modulo image, computed block by block so that every
    /// representative lies in a single block.
    pub fn ext(&self, s: u32, t: u32) -> Result<Arc<ExtGroup>> {
        self.check_ext_range(s, t)?;
        let cell = self
            .groups
            .get(&(s, t))
            .ok_or_else(|| CoreError::OutOfRange(format!("{} ({s},{t})", self.tag())))?;
        cell.get_or_init(|| self.compute_ext(s, t).map(Arc::new)).clone()
    }

    fn compute_ext(&self, s: u32, t: u32) -> Result<ExtGroup> {
        let p = self.prime();
        let slice = self.slice(s, t)?;
        let target_dim = self.dim(s + 1, t);
        let prev = if s > 0 { Some(self.slice(s - 1, t)?) } else { None };
        let mut classes = Vec::new();
        let mut reducer: Echelon<SparseVector> = Echelon::new(p, slice.dim());
        let mut all_boundaries = Vec::new();
        let mut reps = Vec::new();
        for &(b, _) in &slice.blocks {
            let range = slice.block_range(b);
            let start = range.start as u32;
            let (kernel, _) = kernel_of_columns(p, target_dim, &slice.differential[range]);
            let cycles: Vec<SparseVector> = kernel.into_iter().map(|v| v.remap(|i| i + start)).collect();
            let boundaries: Vec<SparseVector> = match prev {
                Some(prev) => prev.block_range(b).map(|i| prev.differential[i].clone()).collect(),
                None => Vec::new(),
            };
            for r in subquotient_basis(p, slice.dim(), &cycles, &boundaries)? {
                reps.push((b, r));
            }
            all_boundaries.extend(boundaries);
        }
        for bd in all_boundaries {
            let _ = reducer.insert(bd, SparseVector::zero());
        }
        for (index, (block, rep)) in reps.into_iter().enumerate() {
            if reducer.insert(rep.clone(), SparseVector::unit(index as u32)).is_err() {
                return Err(CoreError::InconsistentComplex(format!(
                    "{} ({s},{t}): representative {index} is dependent",
                    self.tag()
                )));
            }
            classes.push(ExtClass {
                tag: self.tag(),
                s,
                t,
                index,
                block,
                representative: rep,
            });
        }
        Ok(ExtGroup {
            tag: self.tag(),
            s,
            t,
            classes,
            reducer,
        })
    }
}
