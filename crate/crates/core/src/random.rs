//! Seeded random links, presentations and move sequences for the property
//! suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::invariants::CouplingLevel;
use crate::link::{FramedLink, Role};
use crate::surgery::{apply_move, blow_down_candidates, KirbyMove, SurgeryPresentation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with entries in `[-bound, bound]`.
pub fn symmetric_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-bound..=bound);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Observed link with `n` components, linking entries in `[-entry, entry]`
/// and charges in `[-charge, charge]`.
pub fn observed_link<R: Rng>(rng: &mut R, n: usize, entry: i64, charge: i64) -> FramedLink {
    let linking = symmetric_matrix(rng, n, entry);
    let charges = (0..n).map(|_| rng.gen_range(-charge..=charge)).collect();
    FramedLink::new(linking, charges)
}

/// Presentation with `observed` observed components (charges within one
/// colour period) followed by `surgery` surgery components.
pub fn presentation<R: Rng>(
    rng: &mut R,
    k: CouplingLevel,
    observed: usize,
    surgery: usize,
    entry: i64,
) -> SurgeryPresentation {
    let n = observed + surgery;
    let linking = symmetric_matrix(rng, n, entry);
    let c = k.colours() as i64;
    let charges = (0..n)
        .map(|i| {
            if i < observed {
                rng.gen_range(-c..=c)
            } else {
                0
            }
        })
        .collect();
    let roles = (0..n)
        .map(|i| {
            if i < observed {
                Role::Observed
            } else {
                Role::Surgery
            }
        })
        .collect();
    SurgeryPresentation::new(FramedLink::with_roles(linking, charges, roles), k)
}

/// A random applicable move. Blow-ups are skipped once the presentation
/// has `max_surgery` surgery components.
pub fn kirby_move<R: Rng>(
    rng: &mut R,
    p: &SurgeryPresentation,
    max_surgery: usize,
) -> Option<KirbyMove> {
    let surgery = p.link.indices_with(Role::Surgery);
    let downs = blow_down_candidates(p);
    let mut options = Vec::with_capacity(3);
    if surgery.len() < max_surgery {
        options.push(0);
    }
    if !downs.is_empty() {
        options.push(1);
    }
    if !surgery.is_empty() && p.link.len() >= 2 {
        options.push(2);
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    match options.choose(rng)? {
        0 => Some(KirbyMove::BlowUp(sign)),
        1 => downs.choose(rng).map(|&j| KirbyMove::BlowDown(j)),
        _ => {
            let j = *surgery.choose(rng)?;
            let others: Vec<usize> = (0..p.link.len()).filter(|&i| i != j).collect();
            let i = *others.choose(rng)?;
            Some(KirbyMove::Slide { i, j, sign })
        }
    }
}

/// Applies up to `len` random moves; returns the moves taken and the end
/// presentation.
pub fn move_sequence<R: Rng>(
    rng: &mut R,
    p: &SurgeryPresentation,
    len: usize,
    max_surgery: usize,
) -> (Vec<KirbyMove>, SurgeryPresentation) {
    let mut cur = p.clone();
    let mut moves = Vec::with_capacity(len);
    for _ in 0..len {
        let Some(m) = kirby_move(rng, &cur, max_surgery) else {
            break;
        };
        match apply_move(&cur, m) {
            Ok(next) => {
                moves.push(m);
                cur = next;
            }
            // only overflow can fail here; stop the sequence
            Err(_) => break,
        }
    }
    (moves, cur)
}
