//! Moore-machine reduction by partition refinement.

use crate::alphabet::Symbol;
use crate::machine::{MooreMachine, StateId};
use std::collections::HashMap;

/// Returns the minimal complete Moore machine with the same evaluate()
/// behavior as `m`.
///
/// Unreachable states are dropped first; the remaining states are split by
/// output symbol and refined until the successor signatures stabilize. The
/// result is renumbered in breadth-first order from the initial state, so
/// minimizing equal-behavior machines yields identical tables.
pub fn minimize(m: &MooreMachine) -> MooreMachine {
    let sigma = m.input_alphabet().size() as usize;

    // Reachable states in BFS order.
    let mut order: Vec<StateId> = Vec::new();
    let mut seen = vec![false; m.num_states() as usize];
    seen[m.initial() as usize] = true;
    order.push(m.initial());
    let mut head = 0;
    while head < order.len() {
        let q = order[head];
        head += 1;
        for s in 0..sigma {
            let t = m.step(q, s as Symbol);
            if !seen[t as usize] {
                seen[t as usize] = true;
                order.push(t);
            }
        }
    }

    // block[q] is q's partition block; start from the output partition.
    let mut block: Vec<u32> = vec![u32::MAX; m.num_states() as usize];
    let mut num_blocks = {
        let mut by_output: HashMap<Symbol, u32> = HashMap::new();
        let mut next = 0u32;
        for &q in &order {
            let b = *by_output.entry(m.output(q)).or_insert_with(|| {
                let b = next;
                next += 1;
                b
            });
            block[q as usize] = b;
        }
        next
    };

    // Refine: signature = (own block, block of each successor).
    loop {
        let mut by_sig: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next_block: Vec<u32> = vec![u32::MAX; m.num_states() as usize];
        let mut next = 0u32;
        for &q in &order {
            let mut sig = Vec::with_capacity(sigma + 1);
            sig.push(block[q as usize]);
            for s in 0..sigma {
                sig.push(block[m.step(q, s as Symbol) as usize]);
            }
            let b = *by_sig.entry(sig).or_insert_with(|| {
                let b = next;
                next += 1;
                b
            });
            next_block[q as usize] = b;
        }
        if next == num_blocks {
            break;
        }
        block = next_block;
        num_blocks = next;
    }

    // Renumber blocks in BFS order from the initial block.
    let mut new_id: Vec<u32> = vec![u32::MAX; num_blocks as usize];
    let mut reps: Vec<StateId> = Vec::with_capacity(num_blocks as usize);
    let mut queue: Vec<StateId> = vec![m.initial()];
    new_id[block[m.initial() as usize] as usize] = 0;
    reps.push(m.initial());
    let mut head = 0;
    while head < queue.len() {
        let q = queue[head];
        head += 1;
        for s in 0..sigma {
            let t = m.step(q, s as Symbol);
            let b = block[t as usize] as usize;
            if new_id[b] == u32::MAX {
                new_id[b] = reps.len() as u32;
                reps.push(t);
                queue.push(t);
            }
        }
    }

    let mut delta = Vec::with_capacity(reps.len() * sigma);
    let mut lambda = Vec::with_capacity(reps.len());
    for &rep in &reps {
        for s in 0..sigma {
            let t = m.step(rep, s as Symbol);
            delta.push(new_id[block[t as usize] as usize]);
        }
    }
    for &rep in &reps {
        lambda.push(m.output(rep));
    }

    MooreMachine::new(m.input_alphabet(), m.output_alphabet(), 0, delta, lambda)
        .expect("quotient of a valid machine is valid")
}
