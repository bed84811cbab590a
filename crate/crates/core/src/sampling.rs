//! Seeded random instances for property sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::MAction;
use crate::finset::{decode_table, encode_table, FinSet};
use crate::fixtures;
use crate::monoid::{enumerate_homs, for_each_hom_into, Monoid, MonoidHom};

pub const DEFAULT_SEED: u64 = 0x6761_6c6d;

/// Every action of `m` on `{0, …, n-1}`, as homomorphisms into the full
/// transformation monoid. Order follows the transformation tables.
pub fn enumerate_actions(m: &Monoid, n: usize) -> Vec<MAction> {
    let count = n.pow(n as u32);
    let identity = encode_table(&(0..n).collect::<Vec<_>>(), n);
    let compose = |f: usize, g: usize| {
        let (f, g) = (decode_table(f, n, n), decode_table(g, n, n));
        encode_table(&g.iter().map(|&x| f[x]).collect::<Vec<_>>(), n)
    };
    let carrier = FinSet::range(n);
    let mut out = Vec::new();
    for_each_hom_into(m, count, identity, &compose, &mut |codes| {
        let table = codes.iter().flat_map(|&c| decode_table(c, n, n)).collect();
        out.push(MAction::new(m.clone(), carrier.clone(), table).expect("homomorphism into transformations"));
    });
    out
}

/// One sample for the adjunction sweeps: a set `X`, an `A`-action `M`, a
/// homomorphism `h: B → A` and a `B`-action `N`.
#[derive(Clone, Debug)]
pub struct AdjunctionInstance {
    pub a_name: &'static str,
    pub b_name: &'static str,
    pub x: FinSet,
    pub m: MAction,
    pub h: MonoidHom,
    pub n: MAction,
}

pub fn random_instances(seed: u64, count: usize, max_carrier: usize) -> Vec<AdjunctionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = fixtures::named_monoids();
    (0..count)
        .map(|_| {
            let (a_name, a) = pool.choose(&mut rng).unwrap().clone();
            let (b_name, b) = pool.choose(&mut rng).unwrap().clone();
            let x = FinSet::range(rng.gen_range(0..=max_carrier));
            let m = random_action(&mut rng, &a, max_carrier);
            let h = enumerate_homs(&b, &a).choose(&mut rng).unwrap().clone();
            let n = random_action(&mut rng, &b, max_carrier);
            AdjunctionInstance { a_name, b_name, x, m, h, n }
        })
        .collect()
}

fn random_action(rng: &mut ChaCha8Rng, m: &Monoid, max_carrier: usize) -> MAction {
    let size = rng.gen_range(1..=max_carrier);
    enumerate_actions(m, size).choose(rng).unwrap().clone()
}
