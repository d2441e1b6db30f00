//! One-parameter unipotent subgroups u(x) = prod u_i(c_i x^{q_i}) and the
//! tori normalizing them.

pub mod isogeny;
pub mod matching;
pub mod normal_form;
pub mod normalize;
pub mod search;
pub mod spec;
pub mod system;
pub mod table;
pub mod torus;
pub mod weyl;

pub use isogeny::{exceptional_isogeny, isogeny_swap};
pub use matching::{match_to_table, Match};
pub use normal_form::normal_form_factorize;
pub use normalize::{normalize_pair, Normalized};
pub use search::{search_solutions, SearchResult};
pub use spec::{TSpec, USpec};
pub use system::{derive_additivity_system, AdditivitySystem, SysTerm};
pub use table::{instantiate_case, load_tables, plan_instantiations, verify_case, CaseRow, PConstraint};
pub use torus::solve_torus;
pub use weyl::weyl_conjugates;

use crate::chevrep::Representation;
use crate::error::Result;
use crate::exactalg::{Poly, A, B};

/// u(a)u(b) = u(a+b) in the given module.
pub fn check_additive_in(spec: &USpec, rep: &Representation) -> Result<bool> {
    let f = spec.field();
    let (a, b) = (Poly::var(f, A), Poly::var(f, B));
    let lhs = spec.matrix(rep, &a)?.mul(&spec.matrix(rep, &b)?)?;
    Ok(lhs == spec.matrix(rep, &a.add(&b))?)
}

/// u(a)u(b) = u(a+b) in the faithful module.
pub fn check_additive(spec: &USpec) -> Result<bool> {
    check_additive_in(spec, &*spec.faithful_rep()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupId;

    #[test]
    fn examples() {
        let s = USpec::new(GroupId::Sl3, 3, vec![1, 1, 1], vec![1, 1, 2]).unwrap();
        assert!(check_additive(&s).unwrap());
        let s = USpec::new(GroupId::G2, 5, vec![1, 0, 0, 0, 0, 0], vec![1, 0, 0, 0, 0, 0]).unwrap();
        assert!(check_additive(&s).unwrap());
        let s = USpec::new(GroupId::Sl3, 5, vec![1, 1, 1], vec![1, 1, 1]).unwrap();
        assert!(!check_additive(&s).unwrap());
    }
}
