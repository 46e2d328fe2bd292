use super::schema::*;
use crate::arith::is_prime;
use crate::error::CertificateError;
use crate::kg::{kg_exact, KgFactorization};
use crate::metacyclic::{derived_subgroup_check, extension_splits, matrix_word_consistency, GroupShape, WordElement};
use crate::normalizer::{matrix_order, NormalizerData};
use crate::obstructions::{
    find_split_prime, local_twist_data, obstruction_report, splitting_constraints, ObstructionOutcome,
    SplitConstraint, TameLift, DEFAULT_PRIME_CAP,
};
use crate::selmer::selmer_report;
use crate::symplectic::SympMatrix;
use crate::witness::{build_33_group, find_witness, WitnessOutcome, DEFAULT_FACTOR_CAP};
use num_bigint::BigUint;

/// Groups with `|N|` up to this bound get an exhaustive splitting search.
pub const SPLIT_SEARCH_LIMIT: u64 = 2_000_000;

/// Ingredients the certificate cites without computing them.
pub const ASSUMPTIONS: [&str; 4] = [
    "Grothendieck and Raynaud semistability criteria: for an abelian variety over Q_l, the inertia image on X[p] has order dividing K_g",
    "No global obstruction: the embedding problem is solvable globally once all local problems are solvable (Poitou-Tate vanishing of the relevant Shafarevich group)",
    "Twisting surjectivity: the map H^1(Q, A) -> H^1(Q_v, A) is surjective for the chosen auxiliary prime v",
    "Chebotarev density: primes splitting completely in a given finite extension exist; the certificate exhibits the ones used",
];

pub const EXCEPTIONAL_REASON: &str =
    "every prime power dividing p^d + 1 for d <= g divides K_g; for this pair the moduli space of principally polarized abelian varieties with full level-p structure is unirational, so every such representation arises from an abelian variety";

#[derive(Clone, Debug)]
pub struct ConstructConfig {
    /// Trial-division bound for factoring `p^d + 1`.
    pub factor_cap: u64,
    /// Upper bound for all prime searches.
    pub prime_cap: u64,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        Self { factor_cap: DEFAULT_FACTOR_CAP, prime_cap: DEFAULT_PRIME_CAP }
    }
}

fn step<E: std::fmt::Display>(name: &str) -> impl Fn(E) -> CertificateError + '_ {
    move |e| CertificateError::Construction { step: name.into(), detail: e.to_string() }
}

fn fail(name: &str, detail: impl Into<String>) -> CertificateError {
    CertificateError::Construction { step: name.into(), detail: detail.into() }
}

fn kg_block(kg: &KgFactorization) -> KgBlock {
    KgBlock {
        value: kg.value.clone(),
        factors: kg.exponents.iter().map(|(&q, &e)| (Dec(q), Dec(e as u64))).collect(),
    }
}

fn matrix_rows(m: &SympMatrix) -> Vec<Vec<u64>> {
    m.matrix().to_rows()
}

fn shape_block(s: &GroupShape) -> ShapeBlock {
    ShapeBlock { e: Dec(s.e), period: Dec(s.period), action: Dec(s.action), carry: Dec(s.carry) }
}

fn constraint_block(c: &SplitConstraint) -> ConstraintBlock {
    match *c {
        SplitConstraint::CongruentOne { modulus } => ConstraintBlock::CongruentOne { modulus: Dec(modulus) },
        SplitConstraint::PowerResidue { prime, degree } => {
            ConstraintBlock::PowerResidue { prime: Dec(prime), degree: Dec(degree) }
        }
    }
}

fn lift_block(l: &TameLift) -> LiftBlock {
    LiftBlock {
        place: l.place,
        sigma: word(&l.sigma),
        tau: word(&l.tau),
        exponent: Dec(l.lift_exponent),
        modulus: Dec(l.lift_modulus),
        twist: Dec(l.twist),
    }
}

fn splitting_block(shape: &GroupShape) -> Option<SplittingBlock> {
    if shape.order() > SPLIT_SEARCH_LIMIT {
        return None;
    }
    let v = extension_splits(shape);
    Some(SplittingBlock { splits: v.splits, witness: v.witness.map(|(u, w)| [word(&u), word(&w)]), exhaustive: true })
}

fn selmer_blocks(m: u64) -> Result<Vec<SelmerBlock>, CertificateError> {
    [false, true]
        .into_iter()
        .map(|flag| {
            let r = selmer_report(m, flag).map_err(step("selmer"))?;
            Ok(SelmerBlock { m: Dec(m), with_2_condition: flag, order: Dec(r.order), h1_order: Dec(r.h1_order) })
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|blocks| {
            if blocks[1].order != Dec(1) {
                return Err(fail("selmer", format!("H^1 with local conditions has order {} for m = {m}", blocks[1].order)));
            }
            Ok(blocks)
        })
}

/// `l` is the smallest prime meeting the constraints, `v` the next one.
fn auxiliary_primes(
    constraints: &[SplitConstraint],
    field_note: String,
    cap: u64,
) -> Result<AuxiliaryBlock, CertificateError> {
    let cap_err = |e: crate::error::ObstructionError| match e {
        crate::error::ObstructionError::SearchCap(c) => CertificateError::SearchCap(format!("auxiliary prime above {c}")),
        other => fail("auxiliary", other.to_string()),
    };
    let l = find_split_prime(constraints, &[], cap).map_err(cap_err)?;
    let v = find_split_prime(constraints, &[l], cap).map_err(cap_err)?;
    Ok(AuxiliaryBlock {
        field_note,
        constraints: constraints.iter().map(constraint_block).collect(),
        v: Dec(v),
        l: Dec(l),
    })
}

/// Runs the full pipeline for `(g, p)`.
pub fn construct_certificate(g: u32, p: u64, cfg: &ConstructConfig) -> Result<Certificate, CertificateError> {
    if g < 2 {
        return Err(CertificateError::Input(format!("g must be at least 2, got {g}")));
    }
    if !is_prime(p) {
        return Err(CertificateError::Input(format!("{p} is not prime")));
    }
    let kg = kg_exact(g).map_err(step("kg"))?;
    if (g, p) == (3, 3) {
        return special33_certificate(&kg, cfg);
    }
    let outcome = find_witness(g, p, &kg, cfg.factor_cap).map_err(|e| match e {
        crate::error::WitnessError::SearchCap(c) => CertificateError::SearchCap(format!("factoring p^d + 1 beyond {c}")),
        other => fail("witness", other.to_string()),
    })?;
    let w = match outcome {
        WitnessOutcome::Exceptional(report) => {
            return Ok(Certificate {
                schema: SCHEMA_VERSION,
                kind: CertificateKind::Exceptional,
                input: InputBlock { g: Dec(g as u64), p: Dec(p) },
                kg: kg_block(&kg),
                witness: None,
                exceptional: Some(ExceptionalBlock {
                    reason: EXCEPTIONAL_REASON.into(),
                    verdicts: report
                        .verdicts
                        .iter()
                        .map(|v| VerdictBlock {
                            d: Dec(v.d as u64),
                            prime: Dec(v.prime),
                            exponent: Dec(v.exponent as u64),
                            kg_exponent: Dec(v.kg_exponent as u64),
                        })
                        .collect(),
                }),
                group: None,
                splitting: None,
                embedding: None,
                lifts: Vec::new(),
                selmer: Vec::new(),
                auxiliary: None,
                twist: None,
                inertia_generator: None,
                assumptions: vec![ASSUMPTIONS[0].into()],
            });
        }
        WitnessOutcome::Found(w) => w,
    };
    let d = w.d;
    let mut exponent = 0u64;
    let mut t = w.q;
    while t % w.prime == 0 {
        t /= w.prime;
        exponent += 1;
    }

    let nd = NormalizerData::build(p, d).map_err(step("normalizer"))?;
    let pres = nd.verify_presentation().map_err(step("presentation"))?;
    let sim = nd.similitude_character_check().map_err(step("similitude"))?;
    if !sim.surjective {
        return Err(fail("similitude", "similitude character is not surjective"));
    }
    let shape = GroupShape::standard(p, d).map_err(step("shape"))?;
    matrix_word_consistency(&shape, &nd.mat_x, &nd.mat_y, 200, 1).map_err(step("consistency"))?;
    let derived = derived_subgroup_check(&shape).map_err(step("derived"))?;
    let params = nd.tower.params();
    let group = GroupBlock {
        shape: shape_block(&shape),
        field: FieldBlock {
            k_modulus: params.k_modulus.iter().map(|&c| Dec(c)).collect(),
            eta_min_poly: params.eta_min_poly.iter().map(|c| c.iter().map(|&v| Dec(v)).collect()).collect(),
        },
        form: nd.form.matrix().to_rows(),
        x: matrix_rows(&nd.mat_x),
        y: matrix_rows(&nd.mat_y),
        transcript: TranscriptBlock {
            relations: pres.relations.clone(),
            order_x: Dec(pres.order_x),
            order_y: Dec(pres.order_y),
            group_order: Dec(pres.group_order),
            similitude_x: Dec(sim.sim_x),
            similitude_y: Dec(sim.sim_y),
            similitude_surjective: sim.surjective,
            derived_order: Dec(derived.order),
        },
    };
    let splitting = splitting_block(&shape);
    let m = shape.e / (p - 1);

    let (embedding, lifts, constraints, field_note) = match obstruction_report(p, d, cfg.prime_cap) {
        Ok(ObstructionOutcome::Trivial { .. }) => {
            if splitting.as_ref().is_some_and(|s| !s.splits) {
                return Err(fail("splitting", "p = 2 but the extension does not split"));
            }
            // F: the degree-2d subfield of Q(ζ_N), N ≡ 1 mod 2d
            let two_d = 2 * d as u64;
            let mut n = two_d + 1;
            while !is_prime(n) {
                n += two_d;
                if n > cfg.prime_cap {
                    return Err(CertificateError::SearchCap(format!("conductor prime above {}", cfg.prime_cap)));
                }
            }
            let cs = vec![
                SplitConstraint::PowerResidue { prime: n, degree: two_d },
                SplitConstraint::CongruentOne { modulus: m },
            ];
            (None, Vec::new(), cs, format!("F is the degree-{two_d} subfield of Q(zeta_{n})"))
        }
        Ok(ObstructionOutcome::Solved(r)) => {
            if splitting.as_ref().is_some_and(|s| s.splits) {
                return Err(fail("splitting", "odd p but the extension splits"));
            }
            let inst = &r.instance;
            let emb = EmbeddingBlock {
                n: Dec(inst.n as u64),
                d1: Dec(inst.d1),
                n1: Dec(inst.n1),
                n2: inst.n2.map(Dec),
                alpha_n2: inst.alpha_n2.map(Dec),
                frobenius: FrobeniusBlock {
                    at_p: Dec(r.frobenius.at_p),
                    at_n1: Dec(r.frobenius.at_n1),
                    at_n2: r.frobenius.at_n2.map(|(a, b)| [Dec(a), Dec(b)]),
                },
                at_infinity: word(&r.at_infinity),
            };
            let mut lifts = vec![lift_block(&r.at_p), lift_block(&r.at_n1)];
            lifts.extend(r.at_n2.as_ref().map(lift_block));
            let note = match inst.n2 {
                Some(n2) => format!("F = F_1 F_2 with F_1 inside Q(zeta_{}) and F_2 inside Q(zeta_{n2})", inst.n1),
                None => format!("F = F_1 inside Q(zeta_{})", inst.n1),
            };
            (Some(emb), lifts, splitting_constraints(inst), note)
        }
        Err(crate::error::ObstructionError::SearchCap(c)) => {
            return Err(CertificateError::SearchCap(format!("ramified primes above {c}")))
        }
        Err(e) => return Err(fail("obstructions", e.to_string())),
    };

    let selmer = selmer_blocks(m)?;
    let auxiliary = auxiliary_primes(&constraints, field_note, cfg.prime_cap)?;
    let twist = local_twist_data(auxiliary.l.0, w.q, &shape).map_err(step("twist"))?;
    Ok(Certificate {
        schema: SCHEMA_VERSION,
        kind: CertificateKind::Standard,
        input: InputBlock { g: Dec(g as u64), p: Dec(p) },
        kg: kg_block(&kg),
        witness: Some(WitnessBlock { d: Dec(d as u64), q: Dec(w.q), prime: Dec(w.prime), exponent: Dec(exponent) }),
        exceptional: None,
        group: Some(group),
        splitting,
        embedding,
        lifts,
        selmer,
        auxiliary: Some(auxiliary),
        twist: Some(TwistBlock {
            l: Dec(twist.l),
            q: Dec(twist.q),
            c_sigma: word(&twist.c_sigma),
            c_tau: word(&twist.c_tau),
            order: Dec(twist.order),
        }),
        inertia_generator: Some(word(&WordElement::new(shape.e / w.q, 0))),
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

/// `(g, p) = (3, 3)`: the order-78 group, `φ` through `Q(ζ_9)`, `q = 13`.
fn special33_certificate(kg: &KgFactorization, cfg: &ConstructConfig) -> Result<Certificate, CertificateError> {
    let q = 13u64;
    if kg.divides(&BigUint::from(q)) {
        return Err(fail("witness", "13 divides K_3"));
    }
    let data = build_33_group().map_err(step("special33"))?;
    let shape = data.shape();
    matrix_word_consistency(&shape, &data.mat_x, &data.mat_y, 200, 1).map_err(step("consistency"))?;
    let derived = derived_subgroup_check(&shape).map_err(step("derived"))?;
    let order_y = matrix_order(&data.mat_y, 6).ok_or_else(|| fail("special33", "order(Y)"))?;
    let group = GroupBlock {
        shape: shape_block(&shape),
        field: FieldBlock { k_modulus: data.w_modulus.iter().map(|&c| Dec(c)).collect(), eta_min_poly: Vec::new() },
        form: data.form.matrix().to_rows(),
        x: matrix_rows(&data.mat_x),
        y: matrix_rows(&data.mat_y),
        transcript: TranscriptBlock {
            relations: vec!["X^13 = I".into(), "Y^6 = I".into(), "Y X Y^-1 = X^4".into(), "|<X, Y>| = 78 by closure".into()],
            order_x: Dec(13),
            order_y: Dec(order_y),
            group_order: Dec(data.group_order),
            similitude_x: Dec(data.mat_x.similitude().map_err(step("similitude"))?),
            similitude_y: Dec(data.mat_y.similitude().map_err(step("similitude"))?),
            similitude_surjective: data.similitude_values == vec![1, 2],
            derived_order: Dec(derived.order),
        },
    };
    let splitting = splitting_block(&shape);
    if !splitting.as_ref().is_some_and(|s| s.splits) {
        return Err(fail("splitting", "the order-78 group must be a split extension"));
    }
    let constraints = vec![SplitConstraint::CongruentOne { modulus: 9 }, SplitConstraint::CongruentOne { modulus: q }];
    let auxiliary = auxiliary_primes(&constraints, "F = Q(zeta_9), cyclic of degree 6".into(), cfg.prime_cap)?;
    let twist = local_twist_data(auxiliary.l.0, q, &shape).map_err(step("twist"))?;
    Ok(Certificate {
        schema: SCHEMA_VERSION,
        kind: CertificateKind::Special33,
        input: InputBlock { g: Dec(3), p: Dec(3) },
        kg: kg_block(kg),
        witness: Some(WitnessBlock { d: Dec(3), q: Dec(q), prime: Dec(q), exponent: Dec(1) }),
        exceptional: None,
        group: Some(group),
        splitting,
        embedding: None,
        lifts: Vec::new(),
        selmer: selmer_blocks(q)?,
        auxiliary: Some(auxiliary),
        twist: Some(TwistBlock {
            l: Dec(twist.l),
            q: Dec(q),
            c_sigma: word(&twist.c_sigma),
            c_tau: word(&twist.c_tau),
            order: Dec(twist.order),
        }),
        inertia_generator: Some(word(&twist.c_tau)),
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}
