//! Builders for named pebble properties.
//!
//! Each builder returns a sentence over the given constant names. Bound
//! variables are drawn from `x y z w v t`, so constants must not use those
//! names.

use thiserror::Error;

use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropsError {
    #[error("NextNew variant 1 needs an auxiliary constant")]
    MissingAuxiliary,
    #[error("NextNew variant must be 1 or 2, got {0}")]
    BadVariant(u8),
    #[error("constants must be distinct: {0:?}")]
    NotDistinct(Vec<String>),
}

fn abs(var: &str, body: Formula, arg: &str) -> Formula {
    Formula::abstraction(var, body, Term::constant(arg))
}

/// `a` and `b` designate the same element now.
pub fn same(a: &str, b: &str) -> Formula {
    abs("x", abs("y", Formula::eq("x", "y"), a), b)
}

/// `d` never designates the same element at two different moments.
pub fn always_new(d: &str) -> Formula {
    Formula::always(abs(
        "x",
        Formula::next(Formula::always(abs(
            "y",
            Formula::not(Formula::eq("y", "x")),
            d,
        ))),
        d,
    ))
}

/// `a` designates now an element that `d` designated at some moment so far.
pub fn same_in_past(a: &str, d: &str) -> Formula {
    abs("x", Formula::once(abs("y", Formula::eq("y", "x"), d)), a)
}

/// `c` designates the same element now and at the next moment.
pub fn no_change(c: &str) -> Formula {
    abs("x", Formula::next(abs("y", Formula::eq("x", "y"), c)), c)
}

/// `G <x. X O <y. x = y>(a)>(a)`.
///
/// Uses the past-time `O` as written, so the formula holds on every trace:
/// the witness may be the current moment.
pub fn always_return(a: &str) -> Formula {
    Formula::always(abs(
        "x",
        Formula::next(Formula::once(abs("y", Formula::eq("x", "y"), a))),
        a,
    ))
}

// O (<y. y = x>(d) & X <v. v = w>(d)): at some moment so far d sat on x and
// moved to w at the step after.
fn d_moved_from_x_to_w(d: &str) -> Formula {
    Formula::once(Formula::and(
        abs("y", Formula::eq("y", "x"), d),
        Formula::next(abs("v", Formula::eq("v", "w"), d)),
    ))
}

/// `a` moves next to where `d` once moved from `a`'s current element,
/// using the auxiliary constant `c` to name `a`'s next element.
pub fn next_new1(a: &str, d: &str, c: &str) -> Formula {
    Formula::and(
        abs("w", abs("x", d_moved_from_x_to_w(d), a), c),
        abs("z", Formula::next(abs("t", Formula::eq("t", "z"), a)), c),
    )
}

/// Same fact as [`next_new1`] without an auxiliary constant, using `Y`.
pub fn next_new2(a: &str, d: &str) -> Formula {
    Formula::next(abs(
        "w",
        Formula::yesterday(abs("x", d_moved_from_x_to_w(d), a)),
        a,
    ))
}

pub fn next_new(variant: u8, a: &str, d: &str, c: Option<&str>) -> Result<Formula, PropsError> {
    match variant {
        1 => c
            .map(|c| next_new1(a, d, c))
            .ok_or(PropsError::MissingAuxiliary),
        2 => Ok(next_new2(a, d)),
        v => Err(PropsError::BadVariant(v)),
    }
}

/// `E` restricted to pairs (element of `c2`, element of `c1`) visited by the
/// constants does not change over time. `<->` is expanded into two
/// implications.
pub fn rigid_on_visited(e: &str, c1: &str, c2: &str) -> Formula {
    let exy = || Formula::atom(e, ["x", "y"]);
    let persistent = || Formula::and(Formula::always(exy()), Formula::historically(exy()));
    let iff = Formula::and(
        Formula::implies(exy(), persistent()),
        Formula::implies(persistent(), exy()),
    );
    Formula::always(abs("x", abs("y", iff, c1), c2))
}

/// Message `m` starts with sender `s`, is next at a host that `s` and then
/// the receiver `r` both reach, and from then on follows `r`'s path.
pub fn forwarding_protocol(s: &str, r: &str, m: &str) -> Result<Formula, PropsError> {
    if s == r || r == m || s == m {
        return Err(PropsError::NotDistinct(vec![s.into(), r.into(), m.into()]));
    }
    let meet = Formula::next(abs(
        "z",
        Formula::eventually(abs(
            "x",
            Formula::eventually(abs(
                "y",
                Formula::and(Formula::eq("x", "y"), Formula::eq("y", "z")),
                r,
            )),
            s,
        )),
        m,
    ));
    let follow = Formula::next(Formula::always(next_new2(m, r)));
    Ok(Formula::and(Formula::and(same(s, m), meet), follow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, print_formula};
    use crate::syntax::{well_formed_sentence, Alphabet};

    fn all() -> Vec<Formula> {
        vec![
            same("a", "b"),
            always_new("d"),
            same_in_past("a", "d"),
            no_change("c"),
            always_return("a"),
            next_new1("a", "d", "c"),
            next_new2("a", "d"),
            rigid_on_visited("E", "a", "b"),
            forwarding_protocol("s", "r", "m").unwrap(),
        ]
    }

    #[test]
    fn builders_are_well_formed_sentences_and_round_trip() {
        for f in all() {
            let alpha = Alphabet::of(&f);
            assert!(well_formed_sentence(&f, &alpha).is_ok(), "{f}");
            assert_eq!(parse_formula(&print_formula(&f), &alpha).unwrap(), f);
        }
    }

    #[test]
    fn exact_shapes() {
        assert_eq!(print_formula(&same("a", "b")), "<x. <y. x = y>(a)>(b)");
        assert_eq!(print_formula(&same_in_past("a", "d")), "<x. O <y. y = x>(d)>(a)");
        assert_eq!(print_formula(&no_change("c")), "<x. X <y. x = y>(c)>(c)");
        assert_eq!(print_formula(&always_return("a")), "G <x. X O <y. x = y>(a)>(a)");
        assert_eq!(
            print_formula(&next_new1("a", "d", "c")),
            "<w. <x. O (<y. y = x>(d) & X <v. v = w>(d))>(a)>(c) & <z. X <t. t = z>(a)>(c)"
        );
        assert_eq!(
            print_formula(&next_new2("a", "d")),
            "X <w. Y <x. O (<y. y = x>(d) & X <v. v = w>(d))>(a)>(a)"
        );
        assert_eq!(
            print_formula(&rigid_on_visited("E", "c1", "c2")),
            "G <x. <y. (E(x, y) -> G E(x, y) & H E(x, y)) & (G E(x, y) & H E(x, y) -> E(x, y))>(c1)>(c2)"
        );
        assert_eq!(
            print_formula(&forwarding_protocol("s", "r", "m").unwrap()),
            "<x. <y. x = y>(s)>(m) & X <z. F <x. F <y. x = y & y = z>(r)>(s)>(m) & X G X <w. Y <x. O (<y. y = x>(r) & X <v. v = w>(r))>(m)>(m)"
        );
    }

    #[test]
    fn next_new_dispatch() {
        assert_eq!(next_new(2, "a", "d", None).unwrap(), next_new2("a", "d"));
        assert_eq!(next_new(1, "a", "d", Some("c")).unwrap(), next_new1("a", "d", "c"));
        assert_eq!(next_new(1, "a", "d", None), Err(PropsError::MissingAuxiliary));
        assert_eq!(next_new(3, "a", "d", None), Err(PropsError::BadVariant(3)));
    }

    #[test]
    fn forwarding_needs_distinct_constants() {
        assert!(forwarding_protocol("s", "s", "m").is_err());
        assert_eq!(forwarding_protocol("s", "r", "m").unwrap().conjuncts().len(), 3);
    }
}
