//! Standard small monoids and actions used by tests, sweeps and the CLI.

use crate::actions::MAction;
use crate::finset::{Elem, FinSet};
use crate::monoid::{trivial_monoid, Monoid};

/// Cyclic group of order `n` on `e, g, g2, …` with generator symbol `gen`.
pub fn cyclic(n: usize, gen: &str) -> Monoid {
    assert!(n >= 1);
    let label = |k: usize| match k {
        0 => "e".to_string(),
        1 => gen.to_string(),
        k => format!("{gen}{k}"),
    };
    let carrier = FinSet::from_symbols((0..n).map(label)).expect("distinct powers");
    let pos: Vec<usize> = (0..n).map(|k| carrier.index_of(&Elem::sym(label(k))).unwrap()).collect();
    let mut exp = vec![0; n];
    for (k, &p) in pos.iter().enumerate() {
        exp[p] = k;
    }
    Monoid::from_fn(carrier, pos[0], |a, b| pos[(exp[a] + exp[b]) % n]).expect("cyclic group")
}

pub fn z2() -> Monoid {
    cyclic(2, "s")
}

pub fn z3() -> Monoid {
    cyclic(3, "g")
}

pub fn z4() -> Monoid {
    cyclic(4, "g")
}

pub fn klein() -> Monoid {
    z2().direct_product(&z2())
}

/// The two-element idempotent monoid `{e, z}` with `z·z = z`.
pub fn e2() -> Monoid {
    let carrier = FinSet::from_symbols(["e", "z"]).unwrap();
    Monoid::from_fn(carrier, 0, |a, b| a.max(b)).expect("idempotent monoid")
}

/// Cycle notation with 1-based points, `e` for the identity.
pub fn cycle_label(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = perm[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q: Vec<usize> = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn symmetric_parts(n: usize) -> (Monoid, Vec<Vec<usize>>) {
    let perms = permutations(n);
    let carrier = FinSet::from_symbols(perms.iter().map(|p| cycle_label(p))).expect("distinct cycles");
    let mut by_pos = vec![Vec::new(); perms.len()];
    for p in perms {
        let i = carrier.index_of(&Elem::sym(cycle_label(&p))).unwrap();
        by_pos[i] = p;
    }
    let lookup = |p: &[usize]| carrier.index_of(&Elem::sym(cycle_label(p))).unwrap();
    let unit = lookup(&(0..n).collect::<Vec<_>>());
    // (ab)(x) = a(b(x)), so composites act on the left
    let m = Monoid::from_fn(carrier.clone(), unit, |a, b| {
        let c: Vec<usize> = (0..n).map(|x| by_pos[a][by_pos[b][x]]).collect();
        lookup(&c)
    })
    .expect("symmetric group");
    (m, by_pos)
}

/// The symmetric group on `{1, …, n}` with elements in cycle notation.
pub fn symmetric(n: usize) -> Monoid {
    symmetric_parts(n).0
}

pub fn s3() -> Monoid {
    symmetric(3)
}

/// `S_n` acting on `{1, …, n}`.
pub fn natural_action(n: usize) -> MAction {
    let (m, perms) = symmetric_parts(n);
    let carrier = FinSet::from_symbols((1..=n).map(|i| i.to_string())).unwrap();
    let pos: Vec<usize> = (1..=n).map(|i| carrier.index_of(&Elem::sym(i.to_string())).unwrap()).collect();
    let mut point = vec![0; n];
    for (i, &p) in pos.iter().enumerate() {
        point[p] = i;
    }
    let table = (0..m.len() * n).map(|k| pos[perms[k / n][point[k % n]]]).collect();
    MAction::new(m, carrier, table).expect("natural action")
}

/// All maps `{0..n-1} → {0..n-1}` under composition, labelled by image lists.
pub fn full_transformation(n: usize) -> Monoid {
    let count = n.pow(n as u32);
    let label = |k: usize| {
        let digits = crate::finset::decode_table(k, n, n);
        format!("[{}]", digits.iter().map(|d| d.to_string()).collect::<String>())
    };
    let carrier = FinSet::from_symbols((0..count).map(label)).unwrap();
    let pos: Vec<usize> = (0..count).map(|k| carrier.index_of(&Elem::sym(label(k))).unwrap()).collect();
    let mut code = vec![0; count];
    for (k, &p) in pos.iter().enumerate() {
        code[p] = k;
    }
    let id = crate::finset::encode_table(&(0..n).collect::<Vec<_>>(), n);
    Monoid::from_fn(carrier, pos[id], |a, b| {
        let f = crate::finset::decode_table(code[a], n, n);
        let g = crate::finset::decode_table(code[b], n, n);
        let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
        pos[crate::finset::encode_table(&fg, n)]
    })
    .expect("transformation monoid")
}

/// `(ℤ/n, ×)`.
pub fn multiplicative_mod(n: usize) -> Monoid {
    let carrier = FinSet::range(n);
    let val = |p: usize| carrier.get(p).to_string().parse::<usize>().unwrap();
    let pos = |v: usize| carrier.index_of(&Elem::sym(v.to_string())).unwrap();
    Monoid::from_fn(carrier.clone(), pos(1 % n), |a, b| pos(val(a) * val(b) % n)).expect("multiplicative monoid")
}

/// `{0, …, n-1}` under `max`, unit `0`.
pub fn max_chain(n: usize) -> Monoid {
    let carrier = FinSet::range(n);
    let val = |p: usize| carrier.get(p).to_string().parse::<usize>().unwrap();
    let pos = |v: usize| carrier.index_of(&Elem::sym(v.to_string())).unwrap();
    Monoid::from_fn(carrier.clone(), pos(0), |a, b| pos(val(a).max(val(b)))).expect("max monoid")
}

/// A left-zero band `{l1, …, lk}` with an adjoined unit `e`.
pub fn left_zero_with_unit(k: usize) -> Monoid {
    let carrier = FinSet::from_symbols(std::iter::once("e".to_string()).chain((1..=k).map(|i| format!("l{i}")))).unwrap();
    let e = carrier.index_of(&Elem::sym("e")).unwrap();
    Monoid::from_fn(carrier, e, |a, b| if a == e { b } else { a }).expect("left-zero band with unit")
}

/// A group with an absorbing element `0` adjoined.
pub fn with_zero(g: &Monoid) -> Monoid {
    let carrier = FinSet::new(g.carrier().iter().chain(std::iter::once(Elem::sym("0")))).unwrap();
    let zero = carrier.index_of(&Elem::sym("0")).unwrap();
    let to_g = |p: usize| g.carrier().index_of(&carrier.get(p)).unwrap();
    let from_g = |q: usize| carrier.index_of(&g.carrier().get(q)).unwrap();
    let unit = from_g(g.unit());
    Monoid::from_fn(carrier.clone(), unit, |a, b| {
        if a == zero || b == zero {
            zero
        } else {
            from_g(g.mul(to_g(a), to_g(b)))
        }
    })
    .expect("monoid with zero")
}

/// The fixture set used by the oracle sweeps.
pub fn core_monoids() -> Vec<(&'static str, Monoid)> {
    vec![("trivial", trivial_monoid()), ("Z2", z2()), ("Z3", z3()), ("Z4", z4()), ("E2", e2()), ("S3", s3())]
}

/// Every group of order at most 6, up to isomorphism.
pub fn groups_up_to_6() -> Vec<(&'static str, Monoid)> {
    vec![
        ("trivial", trivial_monoid()),
        ("Z2", z2()),
        ("Z3", z3()),
        ("Z4", z4()),
        ("Z2xZ2", klein()),
        ("Z5", cyclic(5, "g")),
        ("Z6", cyclic(6, "g")),
        ("S3", s3()),
    ]
}

/// Hand-built monoids of order at most 6 that are not groups.
pub fn non_groups() -> Vec<(&'static str, Monoid)> {
    vec![
        ("E2", e2()),
        ("T2", full_transformation(2)),
        ("Z4-mult", multiplicative_mod(4)),
        ("Z6-mult", multiplicative_mod(6)),
        ("max3", max_chain(3)),
        ("max5", max_chain(5)),
        ("L2+e", left_zero_with_unit(2)),
        ("Z2+0", with_zero(&z2())),
        ("Z3+0", with_zero(&z3())),
    ]
}

pub fn named_monoids() -> Vec<(&'static str, Monoid)> {
    let mut all = groups_up_to_6();
    all.extend(non_groups());
    all
}
