#![allow(dead_code)]

use vcsp_core::fpoly::FractionalPolymorphism;
use vcsp_core::stp::MultimorphismPair;
use vcsp_core::{catalog, Domain, Language, Rational};
use vcsp_oracles::vcsp::Table;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn dom(d: usize) -> Domain {
    Domain::new(d).unwrap()
}

pub fn cut_lang() -> Language<Rational> {
    Language::new(dom(2)).with("cut", catalog::cut(dom(2))).unwrap()
}

pub fn eq_lang() -> Language<Rational> {
    Language::new(dom(2)).with("eq", catalog::equality(dom(2))).unwrap()
}

/// `{cut}` plus every Boolean unary with values in `{0, 1}`.
pub fn cut_with_unaries() -> Language<Rational> {
    let mut lang = cut_lang();
    for (name, f) in catalog::zero_one_unaries(dom(2)) {
        lang.push(name, f).unwrap();
    }
    lang
}

pub fn tables(lang: &Language<Rational>) -> Vec<Table> {
    lang.functions()
        .iter()
        .map(|f| (f.arity(), f.table().to_vec()))
        .collect()
}

pub fn support_tables(rho: &FractionalPolymorphism<Rational>) -> Vec<(Vec<Vec<usize>>, Rational)> {
    rho.support()
        .iter()
        .map(|(g, w)| (g.ops().iter().map(|op| op.table().to_vec()).collect(), w.clone()))
        .collect()
}

/// Independent admittance check of `rho` against `lang`.
pub fn oracle_admits(lang: &Language<Rational>, rho: &FractionalPolymorphism<Rational>) -> bool {
    vcsp_oracles::vcsp::admits(
        lang.domain().size(),
        &tables(lang),
        rho.arity_in(),
        &support_tables(rho),
    )
}

pub fn oracle_admits_pair(lang: &Language<Rational>, pair: &MultimorphismPair) -> bool {
    vcsp_oracles::vcsp::admits_pair(
        lang.domain().size(),
        &tables(lang),
        pair.meet().table(),
        pair.join().table(),
    )
}

/// Tables for a random language over `d` labels: each function has arity
/// 1 or 2 and integer costs in `0..=max_cost`.
pub fn language_from_tables(d: usize, tables: &[(usize, Vec<i64>)]) -> Language<Rational> {
    let mut lang = Language::new(dom(d));
    for (i, (arity, costs)) in tables.iter().enumerate() {
        let table = costs.iter().map(|&c| q(c, 1)).collect();
        let f = vcsp_core::CostFunction::new(dom(d), *arity, table).unwrap();
        lang.push(format!("f{i}"), f).unwrap();
    }
    lang
}

pub fn language_tables(
    d: usize,
    functions: std::ops::RangeInclusive<usize>,
    max_arity: usize,
    max_cost: i64,
) -> impl proptest::strategy::Strategy<Value = Vec<(usize, Vec<i64>)>> {
    use proptest::prelude::*;
    prop::collection::vec(
        (1..=max_arity).prop_flat_map(move |n| {
            prop::collection::vec(0..=max_cost, d.pow(n as u32)).prop_map(move |t| (n, t))
        }),
        functions,
    )
}
