//! User moves: an Esc event addressed to a declaration node.

use crate::ast::{Address, Event, InvalidAddress, ProgramD};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchResult {
    pub new_program: ProgramD,
    pub switched: bool,
    pub target: Address,
}

/// Applies `w.Esc`. The walk consumes one path element per level; at the
/// target a choice with at least two alternatives drops its first one. Any
/// other target (a leaf, a conjunction, an exhausted choice) is left as is.
pub fn exs_apply(p: &ProgramD, ev: &Event) -> Result<SwitchResult, InvalidAddress> {
    fn go(node: &ProgramD, path: &[usize]) -> Option<(ProgramD, bool)> {
        let Some((&head, rest)) = path.split_first() else {
            return Some(match node {
                ProgramD::Choice(alts) if alts.len() >= 2 => (ProgramD::Choice(alts[1..].to_vec()), true),
                other => (other.clone(), false),
            });
        };
        let items = node.children();
        let (child, switched) = go(items.get(head)?, rest)?;
        if !switched {
            return Some((node.clone(), false));
        }
        let mut rebuilt = items.to_vec();
        rebuilt[head] = child;
        Some(match node {
            ProgramD::And(_) => (ProgramD::And(rebuilt), true),
            ProgramD::Choice(_) => (ProgramD::Choice(rebuilt), true),
            ProgramD::Leaf(_) => unreachable!("leaves have no children"),
        })
    }

    let (new_program, switched) =
        go(p, &ev.address.0).ok_or_else(|| InvalidAddress(ev.address.clone()))?;
    Ok(SwitchResult {
        new_program,
        switched,
        target: ev.address.clone(),
    })
}

/// True iff some choice in the program still has two or more alternatives.
pub fn user_move_available(p: &ProgramD) -> bool {
    match p {
        ProgramD::Leaf(_) => false,
        ProgramD::Choice(alts) if alts.len() >= 2 => true,
        ProgramD::And(items) | ProgramD::Choice(items) => items.iter().any(user_move_available),
    }
}

/// The address a bare `esc` refers to: the only switchable choice, if
/// exactly one exists.
pub fn sole_switchable(p: &ProgramD) -> Option<Address> {
    let mut it = p
        .choices()
        .into_iter()
        .filter(|(_, node)| node.children().len() >= 2)
        .map(|(a, _)| a);
    let first = it.next()?;
    it.next().is_none().then_some(first)
}
