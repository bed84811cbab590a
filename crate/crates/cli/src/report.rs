//! Serializable reports, one per command.

use galmon::actions::{
    adjunction_check_e_gamma, adjunction_check_restrict_coinduct, coinduct, coinduct_counit, fixed_points,
    AdjunctionReport,
};
use galmon::ends::{augmentation_diagram_check, TannakianContext};
use galmon::galois::{self, ConnectionLaws, Correspondence};
use galmon::monoid::{antipode, enumerate_submonoids, enumerate_subgroups, hopf_witness, is_hopf};
use galmon::sampling::random_instances;
use galmon::{FinSet, MAction, Monoid, MonoidHom, Site, Subfunctor, Submonoid};
use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;

use crate::schema::{action_to_file, ActionFile};
use crate::{CliError, SCHEMA};

/// Seeded adjunction instances checked by `laws`.
pub const SWEEP_INSTANCES: usize = 50;
/// Largest carrier drawn for a sweep instance.
pub const SWEEP_MAX_CARRIER: usize = 4;

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: &'static str,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

fn wrap<T: Serialize>(command: &'static str, body: T) -> Value {
    serde_json::to_value(Envelope { schema: SCHEMA, command, body }).expect("reports serialize")
}

#[derive(Serialize)]
pub struct SiteInfo {
    pub spec: String,
    pub objects: Vec<ObjectInfo>,
    pub arrows: usize,
}

#[derive(Serialize)]
pub struct ObjectInfo {
    pub name: String,
    pub size: usize,
}

pub fn site_info(spec: &str, site: &Site) -> SiteInfo {
    SiteInfo {
        spec: spec.to_string(),
        objects: site.objects().iter().map(|o| ObjectInfo { name: o.name.clone(), size: o.action.len() }).collect(),
        arrows: site.arrow_count(),
    }
}

/// Subsets keyed by site object, in site order.
pub fn subsets_json(v: &Subfunctor) -> IndexMap<String, Vec<String>> {
    (0..v.site().len()).map(|i| (v.site().name(i).to_string(), v.labels(i))).collect()
}

#[derive(Serialize)]
struct MonoidInfo {
    elements: Vec<String>,
    unit: String,
    group: bool,
    commutative: bool,
}

fn monoid_info(m: &Monoid) -> MonoidInfo {
    MonoidInfo {
        elements: m.carrier().labels(),
        unit: m.label(m.unit()),
        group: m.is_group(),
        commutative: m.is_commutative(),
    }
}

pub fn validate(m: &Monoid, actions: &[(String, MAction)]) -> Value {
    #[derive(Serialize)]
    struct Action {
        name: String,
        size: usize,
        fixed: Vec<String>,
    }
    #[derive(Serialize)]
    struct Body {
        valid: bool,
        monoid: MonoidInfo,
        actions: Vec<Action>,
    }
    // parsing already rejected anything that breaks an axiom
    let actions = actions
        .iter()
        .map(|(name, a)| Action { name: name.clone(), size: a.len(), fixed: fixed_points(a).set.labels() })
        .collect();
    wrap("validate", Body { valid: true, monoid: monoid_info(m), actions })
}

pub fn subgroups(m: &Monoid) -> Value {
    #[derive(Serialize)]
    struct Body {
        submonoids: Vec<Vec<String>>,
        subgroups: Vec<Vec<String>>,
    }
    wrap(
        "subgroups",
        Body {
            submonoids: enumerate_submonoids(m).iter().map(Submonoid::labels).collect(),
            subgroups: enumerate_subgroups(m).iter().map(Submonoid::labels).collect(),
        },
    )
}

pub fn hopf(m: &Monoid) -> Value {
    #[derive(Serialize)]
    struct Body {
        hopf: bool,
        witness: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        antipode: Option<IndexMap<String, String>>,
    }
    let labels = m.carrier().labels();
    let antipode = antipode(m)
        .ok()
        .map(|s| (0..m.len()).map(|a| (labels[a].clone(), labels[s.at(a)].clone())).collect());
    wrap("hopf", Body { hopf: is_hopf(m), witness: hopf_witness(m).map(|a| m.label(a)), antipode })
}

pub fn inv(spec: &str, site: &Site, h: &MonoidHom) -> Result<Value, CliError> {
    #[derive(Serialize)]
    struct Body {
        site: SiteInfo,
        source: Vec<String>,
        image: Vec<String>,
        invariants: IndexMap<String, Vec<String>>,
        oracle_agrees: bool,
        fixed_by_source: bool,
        stabilizer: Vec<String>,
    }
    let inv = galois::invariants(h, site)?;
    let oracle = galois::invariants_oracle(h, site)?;
    let image = {
        let mut img: Vec<usize> = (0..h.src().len()).map(|b| h.at(b)).collect();
        img.sort_unstable();
        img.dedup();
        img.into_iter().map(|a| h.dst().label(a)).collect()
    };
    Ok(wrap(
        "inv",
        Body {
            site: site_info(spec, site),
            source: h.src().carrier().labels(),
            image,
            invariants: subsets_json(&inv),
            oracle_agrees: inv == oracle,
            fixed_by_source: galois::fixes(h, &inv)?,
            stabilizer: galois::stabilizer(&inv)?.labels(),
        },
    ))
}

pub fn stab(spec: &str, site: &Site, v: &Subfunctor, limit: u64) -> Result<Value, CliError> {
    #[derive(Serialize)]
    struct Body {
        site: SiteInfo,
        subfunctor: IndexMap<String, Vec<String>>,
        pointwise: Vec<String>,
        via_end: Vec<String>,
        agree: bool,
        invariants_of_stabilizer: IndexMap<String, Vec<String>>,
        closed: bool,
    }
    let pointwise = galois::stabilizer(v)?;
    let ctx = TannakianContext::new(site, limit)?;
    let via_end = galois::stabilizer_in(&ctx, v)?;
    let closure = galois::invariants(pointwise.inclusion(), site)?;
    Ok(wrap(
        "stab",
        Body {
            site: site_info(spec, site),
            subfunctor: subsets_json(v),
            agree: pointwise == via_end,
            pointwise: pointwise.labels(),
            via_end: via_end.labels(),
            closed: closure == *v,
            invariants_of_stabilizer: subsets_json(&closure),
        },
    ))
}

pub fn end(spec: &str, site: &Site, v: Option<&Subfunctor>, limit: u64) -> Result<Value, CliError> {
    #[derive(Serialize)]
    struct Augmentation {
        roundtrip_is_identity: bool,
        trivial_path_matches: bool,
    }
    #[derive(Serialize)]
    struct Stab {
        subfunctor: IndexMap<String, Vec<String>>,
        via_end: Vec<String>,
        pointwise: Vec<String>,
        agree: bool,
    }
    #[derive(Serialize)]
    struct Body {
        site: SiteInfo,
        families: usize,
        end_unit: Option<usize>,
        end_commutative: bool,
        end_group: bool,
        rho: IndexMap<String, usize>,
        injective: bool,
        bijective: bool,
        kernel_pairs: Vec<(String, String)>,
        lift_reproduces_actions: bool,
        augmentation: Augmentation,
        #[serde(skip_serializing_if = "Option::is_none")]
        stabilizer: Option<Stab>,
    }
    let ctx = TannakianContext::new(site, limit)?;
    let r = &ctx.reconstruction;
    let m = site.monoid();
    let sets: Vec<FinSet> = site.objects().iter().map(|o| o.action.carrier().clone()).collect();
    let aug = augmentation_diagram_check(m, site, &sets, limit)?;
    let stabilizer = v
        .map(|v| -> Result<Stab, CliError> {
            let via_end = galois::stabilizer_in(&ctx, v)?;
            let pointwise = galois::stabilizer(v)?;
            Ok(Stab {
                subfunctor: subsets_json(v),
                agree: via_end == pointwise,
                via_end: via_end.labels(),
                pointwise: pointwise.labels(),
            })
        })
        .transpose()?;
    Ok(wrap(
        "end",
        Body {
            site: site_info(spec, site),
            families: r.end.len(),
            end_unit: r.end.unit(),
            end_commutative: r.monoid.is_commutative(),
            end_group: r.monoid.is_group(),
            rho: (0..m.len()).map(|a| (m.label(a), r.rho.at(a))).collect(),
            injective: r.rho.is_injective(),
            bijective: r.rho.is_bijective(),
            kernel_pairs: r.kernel_pairs().into_iter().map(|(a, b)| (m.label(a), m.label(b))).collect(),
            lift_reproduces_actions: r.lift_reproduces_actions()?,
            augmentation: Augmentation {
                roundtrip_is_identity: aug.roundtrip_is_identity,
                trivial_path_matches: aug.trivial_path_matches,
            },
            stabilizer,
        },
    ))
}

pub fn corr(spec: &str, c: &Correspondence) -> Value {
    #[derive(Serialize)]
    struct Sub {
        elements: Vec<String>,
        group: bool,
        invariants: usize,
        closure: Vec<String>,
        closed: bool,
    }
    #[derive(Serialize)]
    struct Fun {
        subsets: IndexMap<String, Vec<String>>,
        size: usize,
        stabilizer: Vec<String>,
        closed: bool,
    }
    #[derive(Serialize)]
    struct Counts {
        submonoids: usize,
        closed_submonoids: usize,
        subfunctors: usize,
        closed_subfunctors: usize,
    }
    #[derive(Serialize)]
    struct Body {
        site: SiteInfo,
        counts: Counts,
        submonoids: Vec<Sub>,
        subfunctors: Vec<Fun>,
        bijection: Vec<(usize, usize)>,
        order_reversing: bool,
    }
    let fun_index = |v: &Subfunctor| c.subfunctors.iter().position(|f| f.sub == *v).expect("image subfunctor");
    wrap(
        "corr",
        Body {
            site: site_info(spec, &c.site),
            counts: Counts {
                submonoids: c.submonoids.len(),
                closed_submonoids: c.closed_submonoids().count(),
                subfunctors: c.subfunctors.len(),
                closed_subfunctors: c.closed_subfunctors().count(),
            },
            submonoids: c
                .submonoids
                .iter()
                .map(|e| Sub {
                    elements: e.sub.labels(),
                    group: e.sub.is_group(),
                    invariants: fun_index(&e.inv),
                    closure: e.stab_inv.labels(),
                    closed: e.closed,
                })
                .collect(),
            subfunctors: c
                .subfunctors
                .iter()
                .map(|e| Fun { subsets: subsets_json(&e.sub), size: e.sub.size(), stabilizer: e.stab.labels(), closed: e.closed })
                .collect(),
            bijection: c.bijection.clone(),
            order_reversing: c.order_reversing,
        },
    )
}

#[derive(Serialize)]
pub struct AdjunctionJson {
    pub left: usize,
    pub right: usize,
    pub bijective: bool,
    pub natural: bool,
}

impl From<AdjunctionReport> for AdjunctionJson {
    fn from(r: AdjunctionReport) -> Self {
        AdjunctionJson { left: r.left, right: r.right, bijective: r.bijective, natural: r.natural }
    }
}

pub fn coinduce(h: &MonoidHom, n: &MAction) -> Result<Value, CliError> {
    #[derive(Serialize)]
    struct Body {
        action: ActionFile,
        counit: IndexMap<String, String>,
        adjunction: AdjunctionJson,
    }
    let k = coinduct(h, n)?;
    let counit = coinduct_counit(h, n)?;
    let (kl, nl) = (k.carrier().labels(), n.carrier().labels());
    let counit = (0..k.len()).map(|f| (kl[f].clone(), nl[counit.map().at(f)].clone())).collect();
    // check the adjunction against the coinduced action itself
    let adjunction = adjunction_check_restrict_coinduct(h, &k, n)?.into();
    Ok(wrap("coinduce", Body { action: action_to_file(&k), counit, adjunction }))
}

#[derive(Serialize)]
pub struct LawsJson {
    pub unit_submonoids: bool,
    pub unit_subfunctors: bool,
    pub inv_closure: bool,
    pub stab_closure: bool,
    pub antitone: bool,
    pub submonoids_tested: usize,
    pub subfunctors_tested: usize,
}

impl From<ConnectionLaws> for LawsJson {
    fn from(l: ConnectionLaws) -> Self {
        LawsJson {
            unit_submonoids: l.unit_submonoids,
            unit_subfunctors: l.unit_subfunctors,
            inv_closure: l.inv_closure,
            stab_closure: l.stab_closure,
            antitone: l.antitone,
            submonoids_tested: l.submonoids_tested,
            subfunctors_tested: l.subfunctors_tested,
        }
    }
}

#[derive(Serialize)]
pub struct SweepFailure {
    pub index: usize,
    pub monoids: (String, String),
    pub which: &'static str,
}

#[derive(Serialize)]
pub struct Sweep {
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<SweepFailure>,
}

/// Checks `E ⊣ Γ` and `H ⊣ K` on seeded random instances.
pub fn adjunction_sweep(seed: u64, count: usize, max_carrier: usize) -> Result<Sweep, CliError> {
    let mut failures = Vec::new();
    let instances = random_instances(seed, count, max_carrier);
    for (index, inst) in instances.iter().enumerate() {
        let e_gamma = adjunction_check_e_gamma(inst.m.monoid(), &inst.x, &inst.m)?.holds();
        let h_k = adjunction_check_restrict_coinduct(&inst.h, &inst.m, &inst.n)?.holds();
        for (ok, which) in [(e_gamma, "trivial/fixed points"), (h_k, "restriction/coinduction")] {
            if !ok {
                failures.push(SweepFailure {
                    index,
                    monoids: (inst.a_name.to_string(), inst.b_name.to_string()),
                    which,
                });
            }
        }
    }
    let mut failed: Vec<usize> = failures.iter().map(|f| f.index).collect();
    failed.dedup();
    Ok(Sweep { seed, instances: count, passed: count - failed.len(), failures })
}

pub fn laws(spec: &str, site: &Site, seed: u64) -> Result<Value, CliError> {
    #[derive(Serialize)]
    struct Body {
        site: SiteInfo,
        all_hold: bool,
        laws: LawsJson,
        adjunctions: Sweep,
    }
    let laws = galois::connection_laws(site.monoid(), site)?;
    let sweep = adjunction_sweep(seed, SWEEP_INSTANCES, SWEEP_MAX_CARRIER)?;
    Ok(wrap(
        "laws",
        Body {
            site: site_info(spec, site),
            all_hold: laws.all_hold() && sweep.failures.is_empty(),
            laws: laws.into(),
            adjunctions: sweep,
        },
    ))
}
