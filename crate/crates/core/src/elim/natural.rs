//! Subtraction-free normal form for atoms over ℕ.
//!
//! `l ◇ r` is rewritten as `P ◇ N` where `l − r = P − N` and `P`, `N` have
//! only nonnegative coefficients and constants. A congruence keeps its
//! variables on the left with coefficients reduced into `[0, M)` and the
//! constant folded into the residue.

use num_integer::Integer;

use crate::formula::{Atom, Formula, Term};

pub fn normalize_atom(a: &Atom) -> Atom {
    match a {
        Atom::Le(l, r) | Atom::Lt(l, r) | Atom::Eq(l, r) => {
            let (pos, neg) = l.sub(r).split_signs();
            match a {
                Atom::Le(..) => Atom::Le(pos, neg),
                Atom::Lt(..) => Atom::Lt(pos, neg),
                _ => Atom::Eq(pos, neg),
            }
        }
        Atom::Cong {
            term,
            residue,
            modulus,
        } => {
            let reduced = Term::from_parts(
                0,
                term.monomials().map(|(v, c)| (c.mod_floor(modulus), v.clone())),
            );
            Atom::cong(reduced, residue - term.constant_part(), modulus.clone())
        }
    }
}

/// Rewrites every atom into subtraction-free form; equivalent over ℕ.
pub fn normalize_for_n(f: &Formula) -> Formula {
    f.map_atoms(&mut |a| Formula::Atom(normalize_atom(a)))
}

/// Every atom has nonnegative coefficients and constants on both sides.
pub fn is_subtraction_free(f: &Formula) -> bool {
    f.atoms().iter().all(|a| a.terms().iter().all(|t| t.is_nonnegative_form()))
}
