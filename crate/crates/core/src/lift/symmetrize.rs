//! Post-composition with a sorting map.

use crate::error::{Error, Result};
use crate::fpoly::{FractionalPolymorphism, Mapping};
use crate::index::Label;
use crate::scalar::Scalar;
use crate::vcsp::Domain;

/// `p(α)` = `α` sorted ascending under `order`, where `order[r]` is the
/// label of rank `r`.
pub fn sorting_map(domain: Domain, m: usize, order: &[Label]) -> Result<Mapping> {
    let d = domain.size();
    let mut rank = vec![usize::MAX; d];
    if order.len() != d {
        return Err(Error::InvalidArgument(format!(
            "order lists {} labels, domain has {d}",
            order.len()
        )));
    }
    for (r, &a) in order.iter().enumerate() {
        domain.check_label(a)?;
        if rank[a] != usize::MAX {
            return Err(Error::InvalidArgument(format!("label {a} repeated in order")));
        }
        rank[a] = r;
    }
    Ok(Mapping::from_fn(domain, m, m, |alpha| {
        let mut sorted = alpha.to_vec();
        sorted.sort_by_key(|&a| rank[a]);
        sorted
    }))
}

/// Sorting map under the canonical order `0 < 1 < ... < d-1`.
pub fn canonical_sorting_map(domain: Domain, m: usize) -> Mapping {
    let order: Vec<Label> = domain.labels().collect();
    sorting_map(domain, m, &order).expect("canonical order is a permutation")
}

/// `ρ' = Σ_g ρ(g) χ_{p∘g}`, merging equal mappings.
pub fn symmetrize<T: Scalar>(
    rho: &FractionalPolymorphism<T>,
    p: &Mapping,
) -> Result<FractionalPolymorphism<T>> {
    let support = rho
        .support()
        .iter()
        .map(|(g, w)| Ok((p.compose(g)?, w.clone())))
        .collect::<Result<Vec<_>>>()?;
    FractionalPolymorphism::new(support)
}
