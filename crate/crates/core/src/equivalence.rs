//! Exact equivalence of Moore machines by breadth-first search over the
//! product of their state spaces.

use crate::alphabet::{Symbol, Trace};
use crate::error::AutomatonError;
use crate::machine::{MooreMachine, StateId};
use std::collections::VecDeque;

/// Returns `None` if `a` and `b` agree on every trace, or a shortest trace
/// on which their outputs differ.
pub fn equivalent(a: &MooreMachine, b: &MooreMachine) -> Result<Option<Trace>, AutomatonError> {
    if a.input_alphabet() != b.input_alphabet() {
        return Err(AutomatonError::InputAlphabetMismatch(
            a.input_alphabet().size(),
            b.input_alphabet().size(),
        ));
    }
    if a.output_alphabet() != b.output_alphabet() {
        return Err(AutomatonError::OutputAlphabetMismatch(
            a.output_alphabet().size(),
            b.output_alphabet().size(),
        ));
    }

    let sigma = a.input_alphabet().size() as usize;
    let nb = b.num_states() as usize;
    let idx = |qa: StateId, qb: StateId| qa as usize * nb + qb as usize;

    // Parent pointers for counterexample reconstruction.
    let mut visited = vec![false; a.num_states() as usize * nb];
    let mut parent: Vec<(u32, Symbol)> = vec![(u32::MAX, 0); visited.len()];
    let mut queue: VecDeque<(StateId, StateId)> = VecDeque::new();

    let start = (a.initial(), b.initial());
    visited[idx(start.0, start.1)] = true;
    queue.push_back(start);

    while let Some((qa, qb)) = queue.pop_front() {
        if a.output(qa) != b.output(qb) {
            // Walk parents back to the start pair.
            let mut symbols = Vec::new();
            let mut cur = idx(qa, qb) as u32;
            loop {
                let (prev, sym) = parent[cur as usize];
                if prev == u32::MAX {
                    break;
                }
                symbols.push(sym);
                cur = prev;
            }
            symbols.reverse();
            return Ok(Some(Trace::new(symbols)));
        }
        for s in 0..sigma as Symbol {
            let next = (a.step(qa, s), b.step(qb, s));
            let i = idx(next.0, next.1);
            if !visited[i] {
                visited[i] = true;
                parent[i] = (idx(qa, qb) as u32, s);
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::minimize::minimize;
    use rand::{Rng, SeedableRng};

    fn parity() -> MooreMachine {
        MooreMachine::new(
            Alphabet::new(2),
            Alphabet::new(2),
            0,
            vec![0, 1, 1, 0],
            vec![0, 1],
        )
        .unwrap()
    }

    fn constant(out: Symbol) -> MooreMachine {
        MooreMachine::new(Alphabet::new(2), Alphabet::new(2), 0, vec![0, 0], vec![out]).unwrap()
    }

    fn random_machine(states: u32, rng: &mut impl Rng) -> MooreMachine {
        let delta = (0..states * 2).map(|_| rng.gen_range(0..states)).collect();
        let lambda = (0..states).map(|_| rng.gen_range(0..2u16)).collect();
        MooreMachine::new(Alphabet::new(2), Alphabet::new(2), 0, delta, lambda).unwrap()
    }

    fn all_traces_upto(max_len: usize) -> Vec<Trace> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for t in &frontier {
                for s in 0..2u16 {
                    let mut t2 = t.clone();
                    t2.push(s);
                    out.push(t2.clone());
                    next.push(t2);
                }
            }
            frontier = next;
        }
        out.into_iter().map(Trace::new).collect()
    }

    #[test]
    fn machine_equivalent_to_itself() {
        let m = parity();
        assert_eq!(equivalent(&m, &m).unwrap(), None);
    }

    #[test]
    fn parity_vs_constant_short_counterexample() {
        // States (even, c) agree at the empty trace for c = 0; the first
        // odd-parity prefix (length 1) already differs.
        let ce = equivalent(&parity(), &constant(0)).unwrap().unwrap();
        assert!(ce.len() <= 1);
        assert_ne!(
            parity().evaluate(&ce).unwrap(),
            constant(0).evaluate(&ce).unwrap()
        );
    }

    #[test]
    fn minimization_preserves_equivalence() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_machine(rng.gen_range(1..25), &mut rng);
            assert_eq!(equivalent(&m, &minimize(&m)).unwrap(), None);
        }
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let a = parity();
        let b = MooreMachine::new(Alphabet::new(3), Alphabet::new(2), 0, vec![0, 0, 0], vec![0])
            .unwrap();
        assert!(equivalent(&a, &b).is_err());
    }

    #[test]
    fn verdict_matches_exhaustive_agreement() {
        // equivalent() is absent iff the machines agree on every trace up to
        // length |a|*|b|; testable exhaustively for |a|*|b| <= 12.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let a = random_machine(rng.gen_range(1..5), &mut rng);
            let b = random_machine(rng.gen_range(1..4), &mut rng);
            let bound = (a.num_states() * b.num_states()) as usize;
            if bound > 12 {
                continue;
            }
            let verdict = equivalent(&a, &b).unwrap();
            let agree_everywhere = all_traces_upto(bound)
                .iter()
                .all(|t| a.evaluate(t).unwrap() == b.evaluate(t).unwrap());
            match verdict {
                None => assert!(agree_everywhere),
                Some(ce) => {
                    assert!(!agree_everywhere);
                    assert_ne!(a.evaluate(&ce).unwrap(), b.evaluate(&ce).unwrap());
                }
            }
        }
    }
}
