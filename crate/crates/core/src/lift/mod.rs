//! Lifting a symmetric fractional polymorphism to higher arities.
//!
//! One step takes a symmetric `ω` of arity `m - 1`, explores the graph of
//! mappings `D^m -> D^m` it generates from the identity, moves all mass to
//! the sink components, sorts the outputs so that every operation becomes
//! symmetric, and collapses the result to arity `m`.

pub mod audit;
pub mod certificate;
pub mod graph;
pub mod limit;
pub mod symmetrize;
pub mod tuples;

pub use audit::ProofAudit;
pub use certificate::{f_lambda, indexed_labelings, sink_certificate, CertificateMode, SinkCertificate};
pub use graph::{decompose, sink_decomposition, Edge, MappingGraph, SinkDecomposition};
pub use limit::{
    absorption_from, absorption_probabilities, limit_distribution, single_step_transform,
    stationary_distribution, stationary_on,
};
pub use symmetrize::{canonical_sorting_map, sorting_map, symmetrize};
pub use tuples::{mapping_s, permute_operation, tuple_permute, tuple_s};

use crate::error::{Error, Result};
use crate::fpoly::{admits, FractionalPolymorphism};
use crate::scalar::Scalar;
use crate::vcsp::Language;
use crate::Caps;

/// Every intermediate object of one lifting step.
#[derive(Debug, Clone)]
pub struct LiftTrace<T> {
    pub graph: MappingGraph<T>,
    pub decomposition: SinkDecomposition,
    /// `m -> m`, supported on the sinks.
    pub limit: FractionalPolymorphism<T>,
    /// `m -> m`, every operation symmetric.
    pub symmetrized: FractionalPolymorphism<T>,
    /// `m -> 1`, symmetric.
    pub lifted: FractionalPolymorphism<T>,
}

fn check_seed<T: Scalar>(omega: &FractionalPolymorphism<T>) -> Result<()> {
    if omega.arity_out() != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected an m -> 1 fractional polymorphism, found arity {} -> {}",
            omega.arity_in(),
            omega.arity_out()
        )));
    }
    if omega.arity_in() < 2 {
        return Err(Error::InvalidArgument("seed arity must be at least 2".into()));
    }
    if !omega.is_symmetric() {
        return Err(Error::NotSymmetric(
            "every operation in the seed support must be symmetric; deriving a symmetric \
             fractional polymorphism from one with a non-symmetric support is not supported"
                .into(),
        ));
    }
    Ok(())
}

/// One lifting step with all intermediate objects. `ω` must be admitted by
/// `lang` (not re-checked); the output is verified before it is returned.
pub fn lift_trace<T: Scalar>(
    lang: &Language<T>,
    omega: &FractionalPolymorphism<T>,
    caps: &Caps,
) -> Result<LiftTrace<T>> {
    check_seed(omega)?;
    let graph = MappingGraph::generate(omega, caps.mapping_vertices)?;
    let decomposition = sink_decomposition(&graph);
    let limit = limit_distribution(&graph, &decomposition)?;
    let p = canonical_sorting_map(omega.domain(), graph.arity());
    let symmetrized = symmetrize(&limit, &p)?;
    let lifted = symmetrized.collapse();
    if lifted.arity_in() != graph.arity() || !lifted.is_symmetric() {
        return Err(Error::Internal("lifted distribution is not symmetric".into()));
    }
    if !admits(lang, &lifted, caps.admits)? {
        return Err(Error::Internal("lifted distribution is not admitted".into()));
    }
    Ok(LiftTrace {
        graph,
        decomposition,
        limit,
        symmetrized,
        lifted,
    })
}

/// From a symmetric `ω` of arity `m - 1 >= 2` to a symmetric one of arity `m`.
pub fn lift_once<T: Scalar>(
    lang: &Language<T>,
    omega: &FractionalPolymorphism<T>,
    caps: &Caps,
) -> Result<FractionalPolymorphism<T>> {
    Ok(lift_trace(lang, omega, caps)?.lifted)
}

/// A symmetric fractional polymorphism of arity `target` from a symmetric
/// seed admitted by `lang`.
///
/// Lifts step by step when `target` exceeds the seed arity `k`; otherwise
/// lifts to the least multiple of `target` that is at least `k` and reduces.
pub fn lift_to<T: Scalar>(
    lang: &Language<T>,
    seed: &FractionalPolymorphism<T>,
    target: usize,
    caps: &Caps,
) -> Result<FractionalPolymorphism<T>> {
    if target < 2 {
        return Err(Error::InvalidArgument("target arity must be at least 2".into()));
    }
    check_seed(seed)?;
    if !admits(lang, seed, caps.admits)? {
        return Err(Error::NotAdmitted("the seed is not admitted by the language".into()));
    }
    let k = seed.arity_in();
    if target == k {
        return Ok(seed.clone());
    }
    let top = if target > k { target } else { k.div_ceil(target) * target };
    let mut current = seed.clone();
    while current.arity_in() < top {
        current = lift_once(lang, &current, caps)?;
    }
    if top != target {
        current = current.reduce_arity(target)?;
        if !admits(lang, &current, caps.admits)? {
            return Err(Error::Internal("reduced distribution is not admitted".into()));
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::{Mapping, Operation};
    use crate::vcsp::Domain;
    use crate::{catalog, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn d2() -> Domain {
        Domain::new(2).unwrap()
    }

    fn cut_lang() -> Language<Rational> {
        Language::new(d2()).with("cut", catalog::cut(d2())).unwrap()
    }

    fn min_max(m: usize) -> FractionalPolymorphism<Rational> {
        FractionalPolymorphism::from_operations([
            (Operation::min(d2(), m), q(1, 2)),
            (Operation::max(d2(), m), q(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn cut_lifts_to_three() {
        let lang = cut_lang();
        let trace = lift_trace(&lang, &min_max(2), &Caps::default()).unwrap();
        assert_eq!(trace.lifted.arity_in(), 3);
        assert!(trace.lifted.is_symmetric());
        assert!(trace.symmetrized.is_symmetric());
        assert!(admits(&lang, &trace.limit, 1 << 20).unwrap());
        assert!(admits(&lang, &trace.symmetrized, 1 << 20).unwrap());
    }

    #[test]
    fn cut_lifts_to_four() {
        let lang = cut_lang();
        let out = lift_to(&lang, &min_max(2), 4, &Caps::default()).unwrap();
        assert_eq!(out.arity_in(), 4);
        assert!(out.is_symmetric());
        assert!(admits(&lang, &out, 1 << 20).unwrap());
    }

    #[test]
    fn unary_language_lifts() {
        let lang = Language::new(d2())
            .with("u", catalog::unary(d2(), vec![q(0, 1), q(1, 1)]).unwrap())
            .unwrap();
        let out = lift_once(&lang, &min_max(2), &Caps::default()).unwrap();
        assert!(out.is_symmetric());
    }

    #[test]
    fn empty_language_lifts() {
        let lang: Language<Rational> = Language::new(d2());
        let out = lift_once(&lang, &min_max(2), &Caps::default()).unwrap();
        assert_eq!(out.arity_in(), 3);
        assert!(out.is_symmetric());
    }

    #[test]
    fn same_arity_returns_seed() {
        let seed = min_max(2);
        assert_eq!(lift_to(&cut_lang(), &seed, 2, &Caps::default()).unwrap(), seed);
    }

    #[test]
    fn reduces_four_to_two() {
        let lang = cut_lang();
        let seed = lift_to(&lang, &min_max(2), 4, &Caps::default()).unwrap();
        let out = lift_to(&lang, &seed, 2, &Caps::default()).unwrap();
        assert_eq!(out.arity_in(), 2);
        assert!(admits(&lang, &out, 1 << 20).unwrap());
    }

    #[test]
    fn reduces_three_to_two_via_four() {
        let lang = cut_lang();
        let seed = lift_to(&lang, &min_max(2), 3, &Caps::default()).unwrap();
        let out = lift_to(&lang, &seed, 2, &Caps::default()).unwrap();
        assert_eq!(out.arity_in(), 2);
        assert!(out.is_symmetric());
    }

    #[test]
    fn rejects_non_symmetric_seed() {
        let seed = FractionalPolymorphism::point(Mapping::single(Operation::projection(d2(), 2, 0)));
        assert!(matches!(
            lift_to(&cut_lang(), &seed, 3, &Caps::default()),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            lift_once(&cut_lang(), &seed, &Caps::default()),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn rejects_unadmitted_seed() {
        let lang = Language::new(d2()).with("eq", catalog::equality(d2())).unwrap();
        assert!(matches!(
            lift_to(&lang, &min_max(2), 3, &Caps::default()),
            Err(Error::NotAdmitted(_))
        ));
    }

    #[test]
    fn min_max_of_arity_three_is_not_a_cut_seed() {
        let lang = cut_lang();
        assert!(!admits(&lang, &min_max(3), 1 << 20).unwrap());
    }

    #[test]
    fn rejects_small_targets() {
        assert!(lift_to(&cut_lang(), &min_max(2), 1, &Caps::default()).is_err());
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let caps = Caps {
            mapping_vertices: 2,
            ..Caps::default()
        };
        assert!(matches!(
            lift_once(&cut_lang(), &min_max(2), &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
