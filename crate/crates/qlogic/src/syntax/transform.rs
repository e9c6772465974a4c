//! Structural operations on predicates: free variables, substitution,
//! positivity, past-operator depth and desugaring to the core grammar.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::ast::{Conn, CorrectItem, Designation, Modality, Pred, Quantifier, Term};
use crate::engine::ContextTable;
use crate::truth::TruthValue;

/// Free variable symbols, and whether every fixed-point variable is bound.
pub fn free_info(p: &Pred) -> (BTreeSet<String>, bool) {
    let mut free = BTreeSet::new();
    let mut bound = Vec::new();
    let mut fix_closed = true;
    collect_free(p, &mut bound, 0, &mut free, &mut fix_closed);
    (free, fix_closed)
}

pub fn is_closed(p: &Pred) -> bool {
    let (free, fix_closed) = free_info(p);
    free.is_empty() && fix_closed
}

fn note_term(t: &Term, bound: &[String], free: &mut BTreeSet<String>) {
    if let Term::Var(v) = t {
        if !bound.contains(v) {
            free.insert(v.clone());
        }
    }
}

fn collect_free(p: &Pred, bound: &mut Vec<String>, fix: usize, free: &mut BTreeSet<String>, fix_closed: &mut bool) {
    match p {
        Pred::Lit(_) | Pred::Kappa(_) => {}
        Pred::FixVar => {
            if fix == 0 {
                *fix_closed = false;
            }
        }
        Pred::Eq(a, b) => {
            note_term(a, bound, free);
            note_term(b, bound, free);
        }
        Pred::Atom(_, args) => args.iter().for_each(|t| note_term(t, bound, free)),
        Pred::Not(b) | Pred::Is(_, b) | Pred::Modal(_, b) => collect_free(b, bound, fix, free, fix_closed),
        Pred::Bin(_, l, r) => {
            collect_free(l, bound, fix, free, fix_closed);
            collect_free(r, bound, fix, free, fix_closed);
        }
        Pred::Quant(_, v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, fix, free, fix_closed);
            bound.pop();
        }
        Pred::Mru(v, b, t) => {
            note_term(t, bound, free);
            bound.push(v.clone());
            collect_free(b, bound, fix, free, fix_closed);
            bound.pop();
        }
        Pred::Correct(items) => {
            for item in items {
                if let CorrectItem::Pred(q) = item {
                    collect_free(q, bound, fix, free, fix_closed);
                }
            }
        }
        Pred::Fix(b) => collect_free(b, bound, fix + 1, free, fix_closed),
    }
}

/// Every variable name occurring in `p`, bound or free.
pub fn variable_names(p: &Pred) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn go(p: &Pred, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        };
        match p {
            Pred::Eq(a, b) => {
                term(a);
                term(b);
            }
            Pred::Atom(_, args) => args.iter().for_each(term),
            Pred::Quant(_, v, _) => {
                out.insert(v.clone());
            }
            Pred::Mru(v, _, t) => {
                term(t);
                out.insert(v.clone());
            }
            _ => {}
        }
        for c in p.children() {
            go(c, out);
        }
    }
    go(p, &mut out);
    out
}

/// A variable name based on `base` that does not occur in `avoid`.
pub fn fresh_variable(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// `p[var ↦ v]` for a value identifier `v`.
pub fn substitute(p: &Pred, var: &str, value: &str) -> Pred {
    substitute_term(p, var, &Term::Val(value.to_string()))
}

/// Capture-avoiding replacement of the free occurrences of `var` by `t`.
pub fn substitute_term(p: &Pred, var: &str, t: &Term) -> Pred {
    let on_term = |x: &Term| match x {
        Term::Var(v) if v == var => t.clone(),
        other => other.clone(),
    };
    match p {
        Pred::Lit(_) | Pred::FixVar | Pred::Kappa(_) => p.clone(),
        Pred::Eq(a, b) => Pred::Eq(on_term(a), on_term(b)),
        Pred::Atom(n, args) => Pred::Atom(n.clone(), args.iter().map(on_term).collect()),
        Pred::Not(b) => Pred::not(substitute_term(b, var, t)),
        Pred::Is(d, b) => Pred::is(*d, substitute_term(b, var, t)),
        Pred::Modal(m, b) => Pred::modal(*m, substitute_term(b, var, t)),
        Pred::Bin(c, l, r) => Pred::bin(*c, substitute_term(l, var, t), substitute_term(r, var, t)),
        Pred::Fix(b) => Pred::fix(substitute_term(b, var, t)),
        Pred::Correct(items) => Pred::Correct(
            items
                .iter()
                .map(|i| match i {
                    CorrectItem::Pred(q) => CorrectItem::Pred(substitute_term(q, var, t)),
                    s => s.clone(),
                })
                .collect(),
        ),
        Pred::Quant(q, v, b) => {
            let (v2, b2) = under_binder(v, b, var, t);
            Pred::Quant(*q, v2, Box::new(b2))
        }
        Pred::Mru(v, b, term) => {
            let (v2, b2) = under_binder(v, b, var, t);
            Pred::Mru(v2, Box::new(b2), on_term(term))
        }
    }
}

fn under_binder(v: &str, body: &Pred, var: &str, t: &Term) -> (String, Pred) {
    if v == var {
        return (v.to_string(), body.clone());
    }
    let captures = matches!(t, Term::Var(w) if w == v) && free_info(body).0.contains(var);
    if captures {
        let mut avoid = variable_names(body);
        avoid.insert(var.to_string());
        avoid.insert(t.name().to_string());
        let renamed = fresh_variable(v, &avoid);
        let body = substitute_term(body, v, &Term::Var(renamed.clone()));
        (renamed.clone(), substitute_term(&body, var, t))
    } else {
        (v.to_string(), substitute_term(body, var, t))
    }
}

/// `p[X ↦ κ]`: replaces the free fixed-point variable by a table literal.
pub fn substitute_kappa(p: &Pred, kappa: &Arc<ContextTable>) -> Pred {
    match p {
        Pred::FixVar => Pred::Kappa(kappa.clone()),
        Pred::Fix(_) | Pred::Lit(_) | Pred::Eq(..) | Pred::Atom(..) | Pred::Kappa(_) => p.clone(),
        Pred::Not(b) => Pred::not(substitute_kappa(b, kappa)),
        Pred::Is(d, b) => Pred::is(*d, substitute_kappa(b, kappa)),
        Pred::Modal(m, b) => Pred::modal(*m, substitute_kappa(b, kappa)),
        Pred::Bin(c, l, r) => Pred::bin(*c, substitute_kappa(l, kappa), substitute_kappa(r, kappa)),
        Pred::Quant(q, v, b) => Pred::Quant(*q, v.clone(), Box::new(substitute_kappa(b, kappa))),
        Pred::Mru(v, b, t) => Pred::Mru(v.clone(), Box::new(substitute_kappa(b, kappa)), t.clone()),
        Pred::Correct(items) => Pred::Correct(
            items
                .iter()
                .map(|i| match i {
                    CorrectItem::Pred(q) => CorrectItem::Pred(substitute_kappa(q, kappa)),
                    s => s.clone(),
                })
                .collect(),
        ),
    }
}

/// Every free occurrence of the fixed-point variable sits under an even
/// number of negations. Sugar is desugared before counting.
pub fn check_positive(p: &Pred) -> bool {
    if p.is_core() {
        positive_core(p, false)
    } else {
        positive_core(&desugar(p), false)
    }
}

/// Every `mu` body in `p` is positive in the variable it binds.
pub fn all_fixpoints_positive(p: &Pred) -> bool {
    let core = if p.is_core() { p.clone() } else { desugar(p) };
    fn go(p: &Pred) -> bool {
        if let Pred::Fix(b) = p {
            if !positive_core(b, false) {
                return false;
            }
        }
        p.children().into_iter().all(go)
    }
    go(&core)
}

fn positive_core(p: &Pred, negated: bool) -> bool {
    match p {
        Pred::FixVar => !negated,
        Pred::Fix(_) => true,
        Pred::Not(b) => positive_core(b, !negated),
        _ => p.children().into_iter().all(|c| positive_core(c, negated)),
    }
}

/// Whether a free fixed-point variable sits inside the argument of a sugar
/// operator whose expansion binds that variable itself (`sometime`, `forever`,
/// `infinitely`, `finally`, `recent`, `urecent`, `mru`). Expanding such a
/// predicate would capture the variable, so the engine rejects it.
pub fn fix_var_under_sugar(p: &Pred) -> bool {
    let binds_fix = matches!(
        p,
        Pred::Modal(
            Modality::Sometime
                | Modality::Forever
                | Modality::Infinitely
                | Modality::Finally
                | Modality::Recent
                | Modality::URecent,
            _
        ) | Pred::Mru(..)
    );
    if binds_fix && p.children().into_iter().any(|c| !free_info(c).1) {
        return true;
    }
    p.children().into_iter().any(fix_var_under_sugar)
}

/// Nesting depth of past-looking operators (yesterday, recent, urecent, mru, mu).
pub fn past_depth(p: &Pred) -> usize {
    let own = match p {
        Pred::Modal(Modality::Yesterday | Modality::Recent | Modality::URecent, _) | Pred::Mru(..) | Pred::Fix(_) => 1,
        _ => 0,
    };
    own + p.children().into_iter().map(past_depth).max().unwrap_or(0)
}

fn c_not(p: Pred) -> Pred {
    Pred::not(p)
}

fn c_or(a: Pred, b: Pred) -> Pred {
    Pred::or(a, b)
}

fn c_and(a: Pred, b: Pred) -> Pred {
    c_not(c_or(c_not(a), c_not(b)))
}

fn c_is_t(p: Pred) -> Pred {
    Pred::is(Designation::T, p)
}

fn c_is_f(p: Pred) -> Pred {
    c_is_t(c_not(p))
}

fn c_is_b(p: Pred) -> Pred {
    c_and(c_not(c_is_t(p.clone())), c_not(c_is_f(p)))
}

fn c_is(d: Designation, p: Pred) -> Pred {
    match d {
        Designation::T => c_is_t(p),
        Designation::F => c_is_f(p),
        Designation::B => c_is_b(p),
        Designation::TB => c_not(c_is_t(c_not(p))),
        Designation::TF => c_or(c_is_t(p.clone()), c_is_f(p)),
        Designation::FB => c_or(c_is_f(p.clone()), c_is_b(p)),
    }
}

fn c_false() -> Pred {
    c_is_t(Pred::Lit(TruthValue::Both))
}

fn c_weak(a: Pred, b: Pred) -> Pred {
    c_or(c_not(a), b)
}

fn c_equiv(a: Pred, b: Pred) -> Pred {
    c_or(
        c_or(c_and(c_is_t(a.clone()), c_is_t(b.clone())), c_and(c_is_b(a.clone()), c_is_b(b.clone()))),
        c_and(c_is_f(a), c_is_f(b)),
    )
}

fn c_exists(v: &str, p: Pred) -> Pred {
    Pred::quant(Quantifier::Exists, v, p)
}

fn c_forall(v: &str, p: Pred) -> Pred {
    c_not(c_exists(v, c_not(p)))
}

fn c_modal(m: Modality, p: Pred) -> Pred {
    match m {
        Modality::Someone | Modality::Quorum | Modality::Yesterday | Modality::Tomorrow => Pred::modal(m, p),
        Modality::Everyone => c_not(Pred::modal(Modality::Someone, c_not(p))),
        Modality::Coquorum => c_not(Pred::modal(Modality::Quorum, c_not(p))),
        Modality::QuorumBox => Pred::modal(Modality::Quorum, c_modal(Modality::Everyone, p)),
        Modality::CoquorumDiamond => c_modal(Modality::Coquorum, Pred::modal(Modality::Someone, p)),
        Modality::SomeoneAll => Pred::modal(Modality::Quorum, Pred::modal(Modality::Someone, p)),
        Modality::EveryoneAll => c_modal(Modality::Coquorum, c_modal(Modality::Everyone, p)),
        // Greatest fixed point of `tomorrow (p & X)`, written as the dual of
        // the least fixed point `sometime ! p`.
        Modality::Forever => c_not(c_modal(Modality::Sometime, c_not(p))),
        Modality::Sometime => Pred::fix(Pred::modal(Modality::Tomorrow, c_or(p, Pred::FixVar))),
        Modality::Infinitely => c_modal(Modality::Forever, c_modal(Modality::Sometime, p)),
        Modality::Finally => c_modal(Modality::Sometime, c_modal(Modality::Forever, p)),
        Modality::Recent => Pred::fix(Pred::modal(Modality::Yesterday, c_or(p, Pred::FixVar))),
        Modality::URecent => Pred::fix(c_or(p, Pred::modal(Modality::Yesterday, Pred::FixVar))),
        Modality::Pointwise => c_modal(
            Modality::EveryoneAll,
            c_equiv(Pred::modal(Modality::Quorum, p.clone()), c_modal(Modality::Coquorum, p)),
        ),
    }
}

/// `forever` read literally as the least fixed point of `tomorrow (p & X)`.
/// Over an infinite (or cyclic) timeline this is constantly `F`; kept so
/// tests can document the difference from [`desugar`]'s reading.
pub fn forever_as_least_fixpoint(p: &Pred) -> Pred {
    Pred::fix(Pred::modal(Modality::Tomorrow, c_and(desugar(p), Pred::FixVar)))
}

/// Rewrites every sugar node into the core grammar.
pub fn desugar(p: &Pred) -> Pred {
    rewrite(p, false)
}

/// As [`desugar`], but leaves `mru` nodes in place (with desugared bodies)
/// so they can be evaluated by a direct scan of the past.
pub fn desugar_keeping_mru(p: &Pred) -> Pred {
    rewrite(p, true)
}

fn rewrite(p: &Pred, keep_mru: bool) -> Pred {
    let desugar = |q: &Pred| rewrite(q, keep_mru);
    match p {
        Pred::Lit(TruthValue::Both) | Pred::Eq(..) | Pred::Atom(..) | Pred::FixVar | Pred::Kappa(_) => p.clone(),
        Pred::Lit(TruthValue::False) => c_false(),
        Pred::Lit(TruthValue::True) => c_not(c_false()),
        Pred::Not(b) => c_not(desugar(b)),
        Pred::Is(d, b) => c_is(*d, desugar(b)),
        Pred::Bin(c, l, r) => {
            let (l, r) = (desugar(l), desugar(r));
            match c {
                Conn::Or => c_or(l, r),
                Conn::And => c_and(l, r),
                Conn::Weak => c_weak(l, r),
                Conn::Strong => c_weak(l, c_is_t(r)),
                Conn::Equiv => c_equiv(l, r),
            }
        }
        Pred::Modal(m, b) => c_modal(*m, desugar(b)),
        Pred::Quant(q, v, b) => {
            let body = desugar(b);
            match q {
                Quantifier::Exists => c_exists(v, body),
                Quantifier::Forall => c_forall(v, body),
                Quantifier::Affine => affine(v, &body),
                Quantifier::Unique => c_and(c_exists(v, body.clone()), affine(v, &body)),
            }
        }
        Pred::Mru(v, b, t) if keep_mru => Pred::Mru(v.clone(), Box::new(desugar(b)), t.clone()),
        Pred::Mru(v, b, t) => {
            let body = desugar(b);
            let at_t = substitute_term(&body, v, t);
            Pred::fix(Pred::modal(
                Modality::Yesterday,
                c_or(c_is_t(at_t), c_and(c_not(c_is_t(c_exists(v, body))), Pred::FixVar)),
            ))
        }
        Pred::Correct(items) => {
            let mut parts = items.iter().map(|i| match i {
                CorrectItem::Pred(q) => c_is(Designation::TF, desugar(q)),
                CorrectItem::Symbol { name, arity } => {
                    let vars: Vec<String> = (0..*arity).map(|k| format!("a{k}")).collect();
                    let atom = Pred::Atom(name.clone(), vars.iter().map(|v| Term::Var(v.clone())).collect());
                    vars.iter().rev().fold(c_is(Designation::TF, atom), |acc, v| c_forall(v, acc))
                }
            });
            match parts.next() {
                None => c_not(c_false()),
                Some(first) => parts.fold(first, c_and),
            }
        }
        Pred::Fix(b) => Pred::fix(desugar(b)),
    }
}

// forall a, a'. (p & p[a ↦ a']) ~> a = a'
fn affine(v: &str, body: &Pred) -> Pred {
    let mut avoid = variable_names(body);
    avoid.insert(v.to_string());
    let w = fresh_variable(v, &avoid);
    let renamed = substitute_term(body, v, &Term::Var(w.clone()));
    let inner = c_weak(c_and(body.clone(), renamed), Pred::Eq(Term::Var(v.to_string()), Term::Var(w.clone())));
    c_forall(v, c_forall(&w, inner))
}
