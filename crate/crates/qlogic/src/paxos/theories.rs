//! The simple broadcast protocol, the Paxos theory and its simpler variant,
//! written as theory text, plus the correctness goals and the forward-rule recipe.

use serde::Serialize;

use crate::checker::Theory;
use crate::engine::{denote, EvalError, Valuation};
use crate::syntax::{parse, pretty_print, Conn, Modality, Pred, Quantifier, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SimpleVariant {
    ReliableNoCrash,
    ReliableCrash,
    LossyNoCrash,
    LossyCrash,
}

impl SimpleVariant {
    pub const ALL: [SimpleVariant; 4] =
        [SimpleVariant::ReliableNoCrash, SimpleVariant::ReliableCrash, SimpleVariant::LossyNoCrash, SimpleVariant::LossyCrash];

    pub fn name(self) -> &'static str {
        match self {
            SimpleVariant::ReliableNoCrash => "reliable-no-crash",
            SimpleVariant::ReliableCrash => "reliable-crash",
            SimpleVariant::LossyNoCrash => "lossy-no-crash",
            SimpleVariant::LossyCrash => "lossy-crash",
        }
    }

    pub fn lossy(self) -> bool {
        matches!(self, SimpleVariant::LossyNoCrash | SimpleVariant::LossyCrash)
    }

    pub fn crash(self) -> bool {
        matches!(self, SimpleVariant::ReliableCrash | SimpleVariant::LossyCrash)
    }
}

const SIMPLE_SYMBOLS: [&str; 3] = ["propose", "accept", "decide"];

pub fn build_simple(variant: SimpleVariant) -> Theory {
    let sig = Signature::new([("propose", 0), ("accept", 0), ("decide", 0)]).expect("static signature");
    let mut t = Theory::new(&format!("Simple-{}", variant.name()), sig);
    let decide_back = match variant {
        SimpleVariant::LossyNoCrash => "decide ==> (propose & quorumbox accept)",
        _ => "decide ==> (propose & someoneall accept)",
    };
    let imp = if variant.crash() { "~>" } else { "==>" };
    let accept_fwd = format!("(someoneall propose) {imp} accept");
    let decide_fwd = format!("(propose & someoneall accept) {imp} decide");
    let (accept_fwd, decide_fwd) = if variant.lossy() {
        (format!("finally({accept_fwd})"), format!("finally({decide_fwd})"))
    } else {
        (accept_fwd, decide_fwd)
    };
    let add = |t: &mut Theory, name: &str, text: &str, fwd: bool| t.push_text(name, text, fwd).expect("static axiom");
    add(&mut t, "SimpAccept?", "accept ==> someoneall propose", false);
    add(&mut t, "SimpDecide?", decide_back, false);
    add(&mut t, "SimpAccept!", &accept_fwd, variant.lossy());
    add(&mut t, "SimpDecide!", &decide_fwd, variant.lossy());
    if variant.crash() {
        for p in SIMPLE_SYMBOLS {
            add(&mut t, &format!("Uncrashed[{p}]"), &uncrashed(variant, p), false);
        }
    } else {
        add(&mut t, "Correct", "correct[propose, accept, decide]", false);
    }
    t
}

/// The dense-uncrashed axiom for one symbol, in the phrasing used by the variant.
pub fn uncrashed(variant: SimpleVariant, symbol: &str) -> String {
    if variant == SimpleVariant::LossyCrash {
        format!("isTB quorumbox {symbol} ~> isT someoneall {symbol}")
    } else {
        format!("quorumbox isTB {symbol} ~> someoneall isT {symbol}")
    }
}

pub const PAX_SIGNATURE: [(&str, usize); 6] =
    [("leader", 0), ("propose", 1), ("send", 1), ("write", 1), ("accept", 1), ("decide", 1)];

const PAX_TEXT: &str = "theory Pax
signature leader:0, propose:1, send:1, write:1, accept:1, decide:1
# backward rules
PaxPropose? := forall v. propose(v) ==> (leader & !(v = udfn))
PaxSend? := forall v. send(v) ==> someoneall exists propose
    & ((mru a. accept(a) @ v) | (!isT recent exists accept & v = udfn))
PaxWrite? := forall v. write(v) ==> leader
    & quorum(everyone exists send
        & ((mru a. someone accept(a) @ v) | (propose(v) & !isT recent exists someone accept)))
PaxAccept? := forall v. accept(v) ==> someoneall write(v)
PaxDecideL? := forall v. leader ==> decide(v) ==> quorumbox accept(v)
PaxDecideNotL? := forall v. !leader ==> decide(v) ==> someoneall(leader & decide(v))
# forward rules
PaxPropose! := leader ~> exists propose
@forward
PaxSend! := finally(someoneall exists propose ~> exists send)
@forward
PaxWrite! := finally((leader & quorumbox exists send & exists propose) ~> exists write)
@forward
PaxAccept! := finally(exists someoneall write ~> exists accept)
@forward
PaxDecideL! := finally((leader & exists quorumbox accept) ~> exists decide)
@forward
PaxDecideNotL! := finally((!leader & someoneall(leader & exists decide)) ~> exists decide)
# correctness and liveness
LdrExist := isTF leader & isT someoneall leader
LdrExt[leader] := leader ==> someoneall(leader & leader) ==> leader
LdrExt[propose] := forall a. leader ==> someoneall(leader & propose(a)) ==> propose(a)
LdrExt[send] := forall a. leader ==> someoneall(leader & send(a)) ==> send(a)
LdrExt[write] := forall a. leader ==> someoneall(leader & write(a)) ==> write(a)
LdrExt[accept] := forall a. leader ==> someoneall(leader & accept(a)) ==> accept(a)
LdrExt[decide] := forall a. leader ==> someoneall(leader & decide(a)) ==> decide(a)
LdrExt' := forall v. leader ==> someoneall(leader & write(v)) ==> write(v)
LdrCorrect := infinitely(leader ==> correct[propose, write, decide])
PaxPCorrect := quorumbox correct[propose] & quorumbox correct[send] & quorumbox correct[accept]
    & quorumbox correct[write] & quorumbox correct[decide]
PaxPropose01 := exists01 propose
PaxWrite01 := exists01 write
Pax2Twined := forall v. quorumbox accept(v) ==> coquorumdiamond accept(v)
";

const SPAX_TEXT: &str = "theory SPax
signature leader:0, propose:1, write:1, accept:1, decide:1
SPaxPropose? := forall v. propose(v) ==> leader
SPaxWrite? := forall v. write(v) ==> leader
    & quorum((mru a. someone accept(a) @ v) | (propose(v) & !isT recent exists someone accept))
SPaxAccept? := forall v. accept(v) ==> someoneall write(v)
SPaxDecide? := forall v. decide(v) ==> quorumbox accept(v)
@forward
SPaxWrite! := finally(leader ~> exists write)
@forward
SPaxAccept! := finally(exists someoneall write ~> exists accept)
@forward
SPaxDecide! := finally(exists quorumbox accept ~> exists decide)
SLdrExist := isTF leader & isT someoneall leader
SLdrCorrect := infinitely someoneall(leader & correct[propose, write, decide])
SPaxPCorrect := quorumbox correct[accept]
SPaxWrite01 := exists01 someoneall write
";

/// Theory text of the Paxos theory in the checker's file format.
pub fn pax_text() -> &'static str {
    PAX_TEXT
}

pub fn spax_text() -> &'static str {
    SPAX_TEXT
}

pub fn build_thy_pax() -> Theory {
    Theory::parse_text(PAX_TEXT).expect("bundled Paxos theory parses")
}

pub fn build_thy_spax() -> Theory {
    Theory::parse_text(SPAX_TEXT).expect("bundled simpler Paxos theory parses")
}

pub const GOAL_NAMES: [&str; 3] = ["Validity", "Agreement", "Termination"];

/// Validity, Agreement and Termination over the Paxos signature.
pub fn correctness_goals() -> Vec<(String, Pred)> {
    let sig = Signature::new(PAX_SIGNATURE).expect("static signature");
    [
        ("Validity", "forall v. decide(v) ==> urecent someoneall (leader & propose(v))"),
        ("Agreement", "forall v. forall v'. urecent someoneall decide(v) ==> someoneall decide(v') ==> v' = v"),
        ("Termination", "infinitely everyoneall exists decide"),
    ]
    .into_iter()
    .map(|(n, text)| (n.to_string(), parse(text, &sig).expect("static goal")))
    .collect()
}

/// Splits a backward rule `forall v. [side ==>] action ==> pre` into its
/// variable, optional side condition, action and precondition.
pub fn split_backward(rule: &Pred) -> Option<(String, Option<Pred>, Pred, Pred)> {
    let Pred::Quant(Quantifier::Forall, var, body) = rule else { return None };
    let Pred::Bin(Conn::Strong, first, rest) = body.as_ref() else { return None };
    match rest.as_ref() {
        Pred::Bin(Conn::Strong, action, pre) => {
            Some((var.clone(), Some(first.as_ref().clone()), action.as_ref().clone(), pre.as_ref().clone()))
        }
        _ => Some((var.clone(), None, first.as_ref().clone(), rest.as_ref().clone())),
    }
}

/// The forward rule the recipe derives from a backward rule:
/// `(exists v. side & pre) ~> exists v. action`.
pub fn recipe_forward(rule: &Pred) -> Option<Pred> {
    let (var, side, action, pre) = split_backward(rule)?;
    let lhs = match side {
        Some(s) => Pred::and(s, pre),
        None => pre,
    };
    Some(Pred::bin(Conn::Weak, Pred::quant(Quantifier::Exists, &var, lhs), Pred::quant(Quantifier::Exists, &var, action)))
}

/// Backward/forward rule pairs of the Paxos theory, by axiom name.
pub const PAX_RULE_PAIRS: [(&str, &str); 6] = [
    ("PaxPropose?", "PaxPropose!"),
    ("PaxSend?", "PaxSend!"),
    ("PaxWrite?", "PaxWrite!"),
    ("PaxAccept?", "PaxAccept!"),
    ("PaxDecideL?", "PaxDecideL!"),
    ("PaxDecideNotL?", "PaxDecideNotL!"),
];

/// Simplified antecedents of the Send and Write recipes.
pub const RECIPE_SIMPLIFICATIONS: [(&str, &str); 2] = [
    ("PaxSend?", "someoneall exists propose"),
    ("PaxWrite?", "leader & quorumbox exists send & exists propose"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecipeCheck {
    pub backward: String,
    pub forward: String,
    pub recipe: String,
    /// The recipe rule denotes the same table as the theory's forward rule.
    pub equal: bool,
    /// For Send and Write: the recipe antecedent equals its simplified form.
    pub simplification_equal: Option<bool>,
}

/// Compares each recipe-derived forward rule of the Paxos theory with the
/// theory's own, on one valuation. Rules wrapped in `finally` are compared
/// with the recipe wrapped the same way.
pub fn recipe_report(val: &Valuation) -> Result<Vec<RecipeCheck>, EvalError> {
    let th = build_thy_pax();
    let sig = Signature::new(PAX_SIGNATURE).expect("static signature");
    let mut out = Vec::new();
    for (back, fwd) in PAX_RULE_PAIRS {
        let back_pred = &th.axiom(back).expect("bundled rule").pred;
        let fwd_pred = &th.axiom(fwd).expect("bundled rule").pred;
        let derived = recipe_forward(back_pred).expect("bundled backward rules have recipe shape");
        let recipe = match fwd_pred {
            Pred::Modal(Modality::Finally, _) => Pred::modal(Modality::Finally, derived.clone()),
            _ => derived.clone(),
        };
        let equal = denote(&recipe, val)?.equivalent(&denote(fwd_pred, val)?);
        let simplification_equal = match RECIPE_SIMPLIFICATIONS.iter().find(|(b, _)| *b == back) {
            Some((_, text)) => {
                let Pred::Bin(_, lhs, _) = &derived else { unreachable!("recipe builds a weak implication") };
                let simple = parse(text, &sig).expect("static simplification");
                Some(denote(lhs, val)?.equivalent(&denote(&simple, val)?))
            }
            None => None,
        };
        out.push(RecipeCheck {
            backward: back.to_string(),
            forward: fwd.to_string(),
            recipe: pretty_print(&recipe).expect("no table literals"),
            equal,
            simplification_equal,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_shapes() {
        let t = build_simple(SimpleVariant::ReliableNoCrash);
        assert_eq!(t.axioms.len(), 5);
        assert!(matches!(t.axiom("SimpAccept!").unwrap().pred, Pred::Bin(Conn::Strong, ..)));
        assert!(t.axiom("Correct").is_some());
        let t = build_simple(SimpleVariant::LossyCrash);
        let fwd = &t.axiom("SimpDecide!").unwrap().pred;
        assert!(matches!(fwd, Pred::Modal(Modality::Finally, b) if matches!(b.as_ref(), Pred::Bin(Conn::Weak, ..))));
        assert_eq!(pretty_print(&t.axiom("Uncrashed[accept]").unwrap().pred).unwrap(), "isTB quorumbox accept ~> isT someoneall accept");
        assert_eq!(t.forward_axioms().count(), 2);
    }

    #[test]
    fn pax_shapes() {
        let t = build_thy_pax();
        assert_eq!(t.signature.arity("leader"), Some(0));
        let fwd: Vec<&str> = t.forward_axioms().map(|a| a.name.as_str()).collect();
        assert_eq!(fwd, ["PaxSend!", "PaxWrite!", "PaxAccept!", "PaxDecideL!", "PaxDecideNotL!"]);
        assert!(matches!(t.axiom("PaxWrite01").unwrap().pred, Pred::Quant(Quantifier::Affine, ..)));
        let s = build_thy_spax();
        assert_eq!(s.axioms.len(), 11);
        assert!(!s.signature.contains("send"));
        assert_eq!(pretty_print(&s.axiom("SPaxWrite01").unwrap().pred).unwrap(), "exists01 a. someoneall write(a)");
    }

    #[test]
    fn goals_round_trip() {
        let sig = Signature::new(PAX_SIGNATURE).unwrap();
        for (_, g) in correctness_goals() {
            assert_eq!(parse(&pretty_print(&g).unwrap(), &sig).unwrap(), g);
        }
        let agreement = &correctness_goals()[1].1;
        let Pred::Quant(_, _, inner) = agreement else { panic!() };
        let Pred::Quant(_, _, body) = inner.as_ref() else { panic!() };
        assert!(matches!(body.as_ref(), Pred::Bin(Conn::Strong, _, r) if matches!(r.as_ref(), Pred::Bin(Conn::Strong, ..))));
    }

    #[test]
    fn recipe_on_accept() {
        let t = build_thy_pax();
        let fwd = recipe_forward(&t.axiom("PaxAccept?").unwrap().pred).unwrap();
        assert_eq!(pretty_print(&fwd).unwrap(), "(exists v. someoneall write(v)) ~> exists v. accept(v)");
        let (_, side, _, _) = split_backward(&t.axiom("PaxDecideL?").unwrap().pred).unwrap();
        assert_eq!(side, Some(Pred::constant("leader")));
    }
}
