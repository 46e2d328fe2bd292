//! Re-derives every claim of a certificate from its raw data: matrices are
//! re-multiplied, congruences re-solved, primes re-tested and orders
//! re-counted. Word arithmetic, discrete logs and the splitting search are
//! implemented here again rather than borrowed from the construction path.

use super::construct::ASSUMPTIONS;
use super::schema::*;
use crate::arith::{factor, gcd, is_prime, pow_mod};
use crate::error::CertificateError;
use crate::fp_matrix::FpMatrix;
use crate::kg::{kg_sampled, DEFAULT_SAMPLE_BOUND};
use crate::obstructions::LocalPlace;
use crate::selmer::selmer_report;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

/// Exhaustive non-splitting re-checks run for `|N|` up to this bound.
pub const RECHECK_SPLIT_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: Vec<String>,
}

fn bad(check: &str, detail: impl Into<String>) -> CertificateError {
    CertificateError::CheckFailed { check: check.into(), detail: detail.into() }
}

fn ensure(cond: bool, check: &str, detail: impl FnOnce() -> String) -> Result<(), CertificateError> {
    if cond {
        Ok(())
    } else {
        Err(bad(check, detail()))
    }
}

/// `x^a y^b` with `y x y^{-1} = x^c`, `y^period = x^t`, `x^e = 1`.
#[derive(Clone, Copy, Debug)]
struct Words {
    e: u64,
    period: u64,
    c: u64,
    t: u64,
}

impl Words {
    fn mul(&self, u: (u64, u64), v: (u64, u64)) -> (u64, u64) {
        let e = self.e as u128;
        let twisted = v.0 as u128 * pow_mod(self.c, u.1, self.e) as u128 % e;
        let wrap = (u.1 + v.1) / self.period;
        let a = (u.0 as u128 + twisted + self.t as u128 * wrap as u128) % e;
        (a as u64, (u.1 + v.1) % self.period)
    }

    fn pow(&self, u: (u64, u64), mut n: u64) -> (u64, u64) {
        let (mut acc, mut base) = ((0, 0), u);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn order(&self, u: (u64, u64)) -> u64 {
        let n = self.e * self.period;
        let mut ord = n;
        for (q, _) in factor(n) {
            while ord % q == 0 && self.pow(u, ord / q) == (0, 0) {
                ord /= q;
            }
        }
        ord
    }

    fn inv(&self, u: (u64, u64)) -> (u64, u64) {
        self.pow(u, self.order(u) - 1)
    }

    fn valid(&self, u: (u64, u64)) -> bool {
        u.0 < self.e && u.1 < self.period
    }
}

fn w(word: &Word) -> (u64, u64) {
    (word[0].0, word[1].0)
}

fn multiplicative_order_naive(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

/// Discrete log by walking powers of the smallest generator.
fn log_smallest_root(t: u64, prime: u64) -> Option<u64> {
    let g = (2..prime.max(3)).find(|&g| multiplicative_order_naive(g, prime) == prime - 1).unwrap_or(1);
    let t = t % prime;
    let mut x = 1 % prime;
    for k in 0..prime - 1 {
        if x == t {
            return Some(k);
        }
        x = x * g % prime;
    }
    None
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    (0..m1 * m2).find(|&x| x % m1 == r1 % m1 && x % m2 == r2 % m2).expect("coprime moduli")
}

fn parse_matrix(rows: &[Vec<u64>], p: u64, n: usize, check: &str, name: &str) -> Result<FpMatrix, CertificateError> {
    ensure(rows.len() == n && rows.iter().all(|r| r.len() == n), check, || format!("{name} must be {n}x{n}"))?;
    ensure(rows.iter().flatten().all(|&v| v < p), check, || format!("{name} has entries outside [0, {p})"))?;
    Ok(FpMatrix::from_rows(p, rows))
}

/// `s` with `Mᵀ J M = s J`, if any.
fn similitude(m: &FpMatrix, j: &FpMatrix) -> Option<u64> {
    let lhs = m.transpose().mul(j).mul(m);
    let n = j.rows();
    let (r, c) = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find(|&(r, c)| j.get(r, c) != 0)?;
    let p = j.p();
    let s = lhs.get(r, c) * pow_mod(j.get(r, c), p - 2, p) % p;
    (s != 0 && lhs == j.scale(s)).then_some(s)
}

fn matrix_exact_order(m: &FpMatrix, n: u64) -> bool {
    m.pow(n as u128).is_identity() && factor(n).iter().all(|&(q, _)| !m.pow((n / q) as u128).is_identity())
}

struct Ctx<'a> {
    cert: &'a Certificate,
    g: u64,
    p: u64,
    d: u64,
    q: u64,
    words: Option<Words>,
    passed: Vec<String>,
}

impl Ctx<'_> {
    fn pass(&mut self, name: &str) {
        self.passed.push(name.to_string());
    }
}

/// Runs all checks in order, stopping at the first failure.
pub fn verify_certificate(cert: &Certificate) -> Result<VerificationReport, CertificateError> {
    let mut ctx = Ctx { cert, g: cert.input.g.0, p: cert.input.p.0, d: 0, q: 0, words: None, passed: Vec::new() };
    check_schema(&mut ctx)?;
    check_input(&mut ctx)?;
    check_kg(&mut ctx)?;
    if cert.kind == CertificateKind::Exceptional {
        check_exceptional(&mut ctx)?;
        check_assumptions(&mut ctx)?;
        return Ok(VerificationReport { passed: ctx.passed });
    }
    check_witness(&mut ctx)?;
    check_form(&mut ctx)?;
    check_presentation(&mut ctx)?;
    check_splitting(&mut ctx)?;
    check_instance(&mut ctx)?;
    check_frobenius(&mut ctx)?;
    check_lifts(&mut ctx)?;
    check_selmer(&mut ctx)?;
    check_auxiliary(&mut ctx)?;
    check_twist(&mut ctx)?;
    check_assumptions(&mut ctx)?;
    Ok(VerificationReport { passed: ctx.passed })
}

/// Parses and verifies; malformed JSON is a schema violation.
pub fn verify_json(json: &str) -> Result<VerificationReport, CertificateError> {
    let cert: Certificate = serde_json::from_str(json).map_err(|e| CertificateError::Schema(e.to_string()))?;
    verify_certificate(&cert)
}

fn check_schema(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let c = ctx.cert;
    let name = "schema";
    ensure(c.schema == SCHEMA_VERSION, name, || format!("unsupported schema {}", c.schema))?;
    let full = c.kind != CertificateKind::Exceptional;
    ensure(c.exceptional.is_some() != full, name, || "exceptional block must match the kind".into())?;
    for (present, field) in [
        (c.witness.is_some(), "witness"),
        (c.group.is_some(), "group"),
        (c.auxiliary.is_some(), "auxiliary"),
        (c.twist.is_some(), "twist"),
        (c.inertia_generator.is_some(), "inertia_generator"),
        (!c.selmer.is_empty(), "selmer"),
    ] {
        ensure(present == full, name, || format!("{field} present iff the certificate is not exceptional"))?;
    }
    if c.kind == CertificateKind::Special33 {
        ensure(c.embedding.is_none() && c.lifts.is_empty(), name, || "special certificate has no local lifts".into())?;
    }
    ctx.pass(name);
    Ok(())
}

fn check_input(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "input";
    ensure(ctx.g >= 2 && ctx.g <= 1000, name, || format!("g = {}", ctx.g))?;
    ensure(is_prime(ctx.p), name, || format!("{} is not prime", ctx.p))?;
    ensure(
        (ctx.cert.kind == CertificateKind::Special33) == ((ctx.g, ctx.p) == (3, 3)),
        name,
        || "the special construction is used exactly for (3, 3)".into(),
    )?;
    ctx.pass(name);
    Ok(())
}

fn check_kg(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "kg";
    let kg = &ctx.cert.kg;
    let mut prod = BigUint::one();
    for (q, e) in &kg.factors {
        ensure(is_prime(q.0) && q.0 <= 2 * ctx.g + 1, name, || format!("factor {q} must be a prime <= 2g+1"))?;
        prod *= BigUint::from(q.0).pow(e.0 as u32);
    }
    ensure(prod == kg.value, name, || "factorization does not multiply to the value".into())?;
    let sampled = kg_sampled(ctx.g as u32, DEFAULT_SAMPLE_BOUND).map_err(|e| bad(name, e.to_string()))?;
    ensure(sampled == kg.value, name, || format!("gcd over primes up to 10^4 is {sampled}"))?;
    ctx.pass(name);
    Ok(())
}

fn pow_plus_one(p: u64, d: u64) -> BigUint {
    BigUint::from(p).pow(d as u32) + 1u32
}

fn check_exceptional(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "exceptional";
    let block = ctx.cert.exceptional.as_ref().expect("schema checked");
    let mut expected = Vec::new();
    for d in 1..=ctx.g {
        let n = pow_plus_one(ctx.p, d);
        let n: u64 = n.try_into().map_err(|_| bad(name, "p^d + 1 too large to re-factor"))?;
        for (r, k) in factor(n) {
            let qk = BigUint::from(r).pow(k);
            ensure((&ctx.cert.kg.value % &qk).is_zero(), name, || format!("{r}^{k} | {}^{d}+1 does not divide K_g", ctx.p))?;
            expected.push((d, r, k as u64));
        }
    }
    let listed: Vec<(u64, u64, u64)> = block.verdicts.iter().map(|v| (v.d.0, v.prime.0, v.exponent.0)).collect();
    let mut a = expected.clone();
    let mut b = listed;
    a.sort_unstable();
    b.sort_unstable();
    ensure(a == b, name, || "prime power list differs from the factorization of p^d + 1".into())?;
    ctx.pass(name);
    Ok(())
}

fn check_witness(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "witness";
    let wb = ctx.cert.witness.as_ref().expect("schema checked");
    let (d, q, r, k) = (wb.d.0, wb.q.0, wb.prime.0, wb.exponent.0);
    ensure(is_prime(r) && k >= 1 && r.checked_pow(k as u32) == Some(q), name, || format!("{q} != {r}^{k}"))?;
    ensure(d >= 1 && d <= ctx.g, name, || format!("d = {d} outside [1, g]"))?;
    let qb = BigUint::from(q);
    ensure(!(&ctx.cert.kg.value % &qb).is_zero(), name, || format!("{q} divides K_g"))?;
    if ctx.cert.kind == CertificateKind::Special33 {
        ensure((d, q) == (3, 13), name, || "special witness is (3, 13)".into())?;
        ensure(26 % q == 0, name, || "13 must divide 3^3 - 1".into())?;
    } else {
        ensure((pow_plus_one(ctx.p, d) % &qb).is_zero(), name, || format!("{q} does not divide p^{d} + 1"))?;
    }
    ctx.d = d;
    ctx.q = q;
    ctx.pass(name);
    Ok(())
}

fn check_form(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "form";
    let gb = ctx.cert.group.as_ref().expect("schema checked");
    let n = 2 * ctx.d as usize;
    let j = parse_matrix(&gb.form, ctx.p, n, name, "J")?;
    ensure(j.transpose() == j.neg() && (0..n).all(|i| j.get(i, i) == 0), name, || "J is not alternating".into())?;
    ensure(j.det() != 0, name, || "J is degenerate".into())?;
    ctx.pass(name);
    Ok(())
}

fn expected_shape(ctx: &Ctx) -> Words {
    if ctx.cert.kind == CertificateKind::Special33 {
        return Words { e: 13, period: 6, c: 4, t: 0 };
    }
    let (p, d) = (ctx.p, ctx.d);
    let e = (p - 1) * (p.pow(d as u32) + 1);
    Words { e, period: 2 * d, c: p % e, t: if p == 2 { 0 } else { e / 2 } }
}

fn check_presentation(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "presentation";
    let gb = ctx.cert.group.as_ref().expect("schema checked");
    let n = 2 * ctx.d as usize;
    let p = ctx.p;
    let j = FpMatrix::from_rows(p, &gb.form);
    let x = parse_matrix(&gb.x, p, n, name, "X")?;
    let y = parse_matrix(&gb.y, p, n, name, "Y")?;
    let sw = expected_shape(ctx);
    let sh = &gb.shape;
    ensure(
        (sh.e.0, sh.period.0, sh.action.0, sh.carry.0) == (sw.e, sw.period, sw.c, sw.t),
        name,
        || "group shape does not match (p, d)".into(),
    )?;
    let sx = similitude(&x, &j).ok_or_else(|| bad(name, "X is not a symplectic similitude"))?;
    let sy = similitude(&y, &j).ok_or_else(|| bad(name, "Y is not a symplectic similitude"))?;
    ensure(matrix_exact_order(&x, sw.e), name, || format!("X does not have order {}", sw.e))?;
    ensure(y.pow(sw.period as u128) == x.pow(sw.t as u128), name, || "Y^period != X^carry".into())?;
    let y_inv = y.inverse().ok_or_else(|| bad(name, "Y is singular"))?;
    ensure(y.mul(&x).mul(&y_inv) == x.pow(sw.c as u128), name, || "Y X Y^-1 != X^c".into())?;
    // Y^b X Y^-b = X^{c^b} != X for 0 < b < period forces |N| = e · period
    let mut yb = FpMatrix::identity(p, n);
    let mut yb_inv = FpMatrix::identity(p, n);
    for b in 1..sw.period {
        yb = yb.mul(&y);
        yb_inv = yb_inv.mul(&y_inv);
        ensure(yb.mul(&x).mul(&yb_inv) != x, name, || format!("Y^{b} centralizes X"))?;
    }
    let group_order = sw.e * sw.period;
    let words = Words { ..sw };
    let order_y = sw.period * words.order((sw.t, 0));
    ensure(matrix_exact_order(&y, order_y), name, || format!("Y does not have order {order_y}"))?;
    let ord_sim = |s: u64| if p == 2 { 1 } else { multiplicative_order_naive(s, p) };
    let lcm = ord_sim(sx) / gcd(ord_sim(sx), ord_sim(sy)) * ord_sim(sy);
    let surjective = lcm == p - 1;
    let derived_order = sw.e / gcd(sw.e, (sw.c + sw.e - 1) % sw.e);
    let t = &gb.transcript;
    ensure(
        (t.order_x.0, t.order_y.0, t.group_order.0, t.similitude_x.0, t.similitude_y.0, t.derived_order.0)
            == (sw.e, order_y, group_order, sx, sy, derived_order),
        name,
        || "transcript disagrees with the recomputed orders and similitudes".into(),
    )?;
    ensure(surjective && t.similitude_surjective, name, || "similitude character is not surjective".into())?;
    if ctx.cert.kind == CertificateKind::Special33 {
        ensure(multiplicative_order_naive(4, 13) == 6, name, || "4 must have order 6 mod 13".into())?;
        // ⟨X⟩ is a normal Sylow 13-subgroup, hence the only subgroup of order 13
        ensure(group_order == 78 && (group_order / 13) % 13 != 0, name, || "order-13 subgroup not unique".into())?;
    } else {
        let params = crate::tower::TowerParams {
            p,
            d: ctx.d as u32,
            k_modulus: gb.field.k_modulus.iter().map(|c| c.0).collect(),
            eta_min_poly: gb.field.eta_min_poly.iter().map(|r| r.iter().map(|c| c.0).collect()).collect(),
        };
        crate::tower::FieldTower::from_params(&params).map_err(|e| bad(name, format!("field data: {e}")))?;
    }
    ctx.words = Some(words);
    ctx.pass(name);
    Ok(())
}

fn abelian_modulus(wd: &Words) -> u64 {
    gcd(gcd(wd.e, (wd.c + wd.e - 1) % wd.e), wd.t)
}

fn check_splitting(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "splitting";
    let wd = ctx.words.expect("presentation checked");
    let am = abelian_modulus(&wd);
    let is_lift_pair = |u: (u64, u64), v: (u64, u64)| {
        wd.valid(u)
            && wd.valid(v)
            && u.1 == 0
            && u.0 % am == 1 % am
            && v.1 == 1 % wd.period
            && v.0 % am == 0
            && wd.pow(u, am) == (0, 0)
            && wd.pow(v, wd.period) == (0, 0)
            && wd.mul(u, v) == wd.mul(v, u)
    };
    let expect_split = ctx.p == 2 || ctx.cert.kind == CertificateKind::Special33;
    match &ctx.cert.splitting {
        Some(s) => {
            ensure(s.splits == expect_split, name, || format!("splits = {}, expected {expect_split}", s.splits))?;
            if s.splits {
                let [u, v] = s.witness.as_ref().ok_or_else(|| bad(name, "split without a section"))?;
                ensure(is_lift_pair(w(u), w(v)), name, || "section does not lift N^ab".into())?;
            } else if wd.e * wd.period <= RECHECK_SPLIT_LIMIT {
                let us: Vec<(u64, u64)> =
                    (0..wd.e).filter(|a| a % am == 1 % am).map(|a| (a, 0)).filter(|&u| wd.pow(u, am) == (0, 0)).collect();
                let vs: Vec<(u64, u64)> = (0..wd.e)
                    .filter(|a| a % am == 0)
                    .map(|a| (a, 1 % wd.period))
                    .filter(|&v| wd.pow(v, wd.period) == (0, 0))
                    .collect();
                let found = us.iter().any(|&u| vs.iter().any(|&v| wd.mul(u, v) == wd.mul(v, u)));
                ensure(!found, name, || "a section exists".into())?;
            }
        }
        None => ensure(wd.e * wd.period > RECHECK_SPLIT_LIMIT, name, || "splitting verdict missing".into())?,
    }
    ctx.pass(name);
    Ok(())
}

fn check_instance(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "instance";
    let c = ctx.cert;
    if ctx.p == 2 || c.kind == CertificateKind::Special33 {
        ensure(c.embedding.is_none() && c.lifts.is_empty(), name, || "split case carries no embedding data".into())?;
        ctx.pass(name);
        return Ok(());
    }
    let e = c.embedding.as_ref().ok_or_else(|| bad(name, "embedding data missing"))?;
    let (n, d1, n1) = (e.n.0, e.d1.0, e.n1.0);
    ensure(n < 63 && (1u64 << n) * d1 == 2 * ctx.d && d1 % 2 == 1, name, || "2d != 2^n d_1".into())?;
    let two_n = 1u64 << n;
    ensure(is_prime(n1) && n1 != ctx.p, name, || format!("N_1 = {n1} must be a prime other than p"))?;
    ensure(n1 % (2 * two_n) == two_n + 1, name, || "N_1 != 2^n + 1 mod 2^(n+1)".into())?;
    ensure(pow_mod(ctx.p, (n1 - 1) / 2, n1) == n1 - 1, name, || format!("p is a square mod N_1 = {n1}"))?;
    match (d1 > 1, e.n2, e.alpha_n2) {
        (false, None, None) => {}
        (true, Some(n2), Some(alpha)) => {
            let n2 = n2.0;
            ensure(is_prime(n2) && n2 != ctx.p && n2 != n1, name, || format!("N_2 = {n2} invalid"))?;
            ensure(n2 == 2 * alpha.0 * d1 + 1, name, || "N_2 != 2 alpha d_1 + 1".into())?;
            ensure(n1 % n2 == 1, name, || "N_1 != 1 mod N_2".into())?;
        }
        _ => return Err(bad(name, "N_2 must be present exactly when d_1 > 1")),
    }
    ctx.pass(name);
    Ok(())
}

fn check_frobenius(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "frobenius";
    let Some(e) = ctx.cert.embedding.as_ref() else {
        ctx.pass(name);
        return Ok(());
    };
    let p = ctx.p;
    let (n, d1, n1) = (e.n.0, e.d1.0, e.n1.0);
    let two_n = 1u64 << n;
    let log = |t: u64, prime: u64| log_smallest_root(t, prime).ok_or_else(|| bad(name, format!("{t} is 0 mod {prime}")));
    let at_f2 = match e.n2 {
        Some(n2) => log(p, n2.0)? % d1,
        None => 0,
    };
    let at_p = crt_pair(log(p, n1)? % two_n, two_n, at_f2, d1);
    ensure(at_p == e.frobenius.at_p.0, name, || format!("Frobenius at p is {at_p}"))?;
    ensure(at_p % 2 == 1, name, || "Frobenius at p must be odd".into())?;
    let at_n1 = log(n1, p)?;
    ensure(at_n1 == e.frobenius.at_n1.0, name, || format!("Frobenius at N_1 is {at_n1}"))?;
    let odd_expected = ctx.d % 2 == 0 || p % 4 == 1;
    ensure((at_n1 % 2 == 1) == odd_expected, name, || "parity of the Frobenius index at N_1".into())?;
    let at_n2 = match e.n2 {
        Some(n2) => Some([log(n2.0, p)?, crt_pair(log(n2.0, n1)? % two_n, two_n, 0, d1)]),
        None => None,
    };
    ensure(at_n2 == e.frobenius.at_n2.map(|[a, b]| [a.0, b.0]), name, || "Frobenius at N_2 differs".into())?;
    ctx.pass(name);
    Ok(())
}

fn check_lifts(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "lifts";
    let Some(e) = ctx.cert.embedding.as_ref() else {
        ctx.pass(name);
        return Ok(());
    };
    let wd = ctx.words.expect("presentation checked");
    let p = ctx.p;
    let inf = w(&e.at_infinity);
    ensure(inf == ((p - 1) / 2, ctx.d) && wd.order(inf) == 2, name, || "complex conjugation lift must have order 2".into())?;
    let places: Vec<LocalPlace> = ctx.cert.lifts.iter().map(|l| l.place).collect();
    let mut expected = vec![LocalPlace::P, LocalPlace::N1];
    if e.n2.is_some() {
        expected.push(LocalPlace::N2);
    }
    ensure(places == expected, name, || format!("lifts at {places:?}, expected {expected:?}"))?;
    let two_n = 1u64 << e.n.0;
    for l in &ctx.cert.lifts {
        let (s, t) = (w(&l.sigma), w(&l.tau));
        ensure(wd.valid(s) && wd.valid(t), name, || format!("{:?}: words out of range", l.place))?;
        let lhs = wd.mul(wd.mul(s, t), wd.inv(s));
        ensure(lhs == wd.pow(t, l.twist.0), name, || format!("{:?}: sigma tau sigma^-1 != tau^{}", l.place, l.twist))?;
        let shape_ok = match l.place {
            LocalPlace::P => s == (0, e.frobenius.at_p.0) && t.1 == 0 && t.0 % (p - 1) == 1 % (p - 1) && l.twist.0 == p,
            LocalPlace::N1 => {
                s.1 == 0 && s.0 % (p - 1) == e.frobenius.at_n1.0 % (p - 1) && t == (0, e.d1.0) && l.twist == e.n1
            }
            LocalPlace::N2 => {
                let [a, bd1] = e.frobenius.at_n2.expect("N_2 present");
                s.0 % (p - 1) == a.0 % (p - 1) && s.1 == bd1.0 && t == (0, two_n) && Some(l.twist) == e.n2
            }
            LocalPlace::Infinity => false,
        };
        ensure(shape_ok, name, || format!("{:?}: lift does not have the required images", l.place))?;
    }
    ctx.pass(name);
    Ok(())
}

fn selmer_modulus(ctx: &Ctx) -> u64 {
    if ctx.cert.kind == CertificateKind::Special33 {
        13
    } else {
        ctx.p.pow(ctx.d as u32) + 1
    }
}

fn check_selmer(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "selmer";
    let m = selmer_modulus(ctx);
    let flags: Vec<bool> = ctx.cert.selmer.iter().map(|s| s.with_2_condition).collect();
    ensure(flags == [false, true], name, || "expected reports without and with the 2-condition".into())?;
    for s in &ctx.cert.selmer {
        ensure(s.m.0 == m, name, || format!("Selmer modulus {} != {m}", s.m))?;
        let r = selmer_report(m, s.with_2_condition).map_err(|e| bad(name, e.to_string()))?;
        ensure((r.order, r.h1_order) == (s.order.0, s.h1_order.0), name, || "Selmer orders differ".into())?;
        let expected = if !s.with_2_condition && m % 8 == 0 { 2 } else { 1 };
        ensure(r.order == expected, name, || format!("Selmer order {} for m = {m}", r.order))?;
    }
    ctx.pass(name);
    Ok(())
}

fn expected_constraints(ctx: &Ctx) -> Result<Vec<ConstraintBlock>, CertificateError> {
    let one = |m: u64| ConstraintBlock::CongruentOne { modulus: Dec(m) };
    let res = |prime: u64, degree: u64| ConstraintBlock::PowerResidue { prime: Dec(prime), degree: Dec(degree) };
    if ctx.cert.kind == CertificateKind::Special33 {
        return Ok(vec![one(9), one(13)]);
    }
    let m = ctx.p.pow(ctx.d as u32) + 1;
    if ctx.p == 2 {
        let two_d = 2 * ctx.d;
        let n = (1..).map(|k| 1 + k * two_d).find(|&t| is_prime(t)).expect("Dirichlet");
        return Ok(vec![res(n, two_d), one(m)]);
    }
    let e = ctx.cert.embedding.as_ref().ok_or_else(|| bad("auxiliary", "embedding data missing"))?;
    let mut cs = vec![one(ctx.p), res(e.n1.0, 1 << e.n.0)];
    if let Some(n2) = e.n2 {
        cs.push(res(n2.0, e.d1.0));
    }
    cs.push(one(m));
    Ok(cs)
}

fn satisfies(t: u64, c: &ConstraintBlock) -> bool {
    match *c {
        ConstraintBlock::CongruentOne { modulus } => t % modulus.0 == 1 % modulus.0,
        ConstraintBlock::PowerResidue { prime, degree } => {
            let (r, k) = (prime.0, degree.0);
            (r - 1) % k == 0 && t % r != 0 && pow_mod(t, (r - 1) / k, r) == 1
        }
    }
}

fn check_auxiliary(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "auxiliary";
    let a = ctx.cert.auxiliary.as_ref().expect("schema checked");
    let expected = expected_constraints(ctx)?;
    ensure(a.constraints == expected, name, || "splitting constraints differ from the instance".into())?;
    let (l, v) = (a.l.0, a.v.0);
    ensure(l != v, name, || "v and l must differ".into())?;
    for t in [l, v] {
        ensure(is_prime(t), name, || format!("{t} is not prime"))?;
        ensure(expected.iter().all(|c| satisfies(t, c)), name, || format!("{t} does not split completely"))?;
    }
    ensure((l - 1) % ctx.q == 0, name, || format!("l = {l} is not 1 mod q = {}", ctx.q))?;
    ctx.pass(name);
    Ok(())
}

fn check_twist(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "twist";
    let t = ctx.cert.twist.as_ref().expect("schema checked");
    let wd = ctx.words.expect("presentation checked");
    let q = ctx.q;
    ensure(t.q.0 == q && t.l == ctx.cert.auxiliary.as_ref().expect("schema checked").l, name, || "twist refers to other data".into())?;
    ensure(w(&t.c_sigma) == (0, 0), name, || "c(sigma) must vanish".into())?;
    let c = w(&t.c_tau);
    ensure(wd.e % q == 0 && c == (wd.e / q, 0), name, || format!("c(tau) must be x^(e/q) = x^{}", wd.e / q.max(1)))?;
    ensure(wd.order(c) == q && t.order.0 == q, name, || format!("c(tau) must have order {q}"))?;
    ensure(wd.pow(c, t.l.0 - 1) == (0, 0), name, || "(l - 1) c(tau) != 0".into())?;
    let g = gcd(wd.e, (wd.c + wd.e - 1) % wd.e);
    ensure(c.0 % g == 0, name, || "c(tau) is not in [N, N]".into())?;
    let inertia = w(ctx.cert.inertia_generator.as_ref().expect("schema checked"));
    ensure(inertia == c, name, || "inertia generator differs from c(tau)".into())?;
    if ctx.cert.kind == CertificateKind::Standard {
        let m = ctx.p.pow(ctx.d as u32) + 1;
        ensure(inertia.0 == (ctx.p - 1) * m / q, name, || "inertia generator must be x^((p-1)(p^d+1)/q)".into())?;
    }
    ctx.pass(name);
    Ok(())
}

fn check_assumptions(ctx: &mut Ctx) -> Result<(), CertificateError> {
    let name = "assumptions";
    let listed = &ctx.cert.assumptions;
    let needed: &[&str] = if ctx.cert.kind == CertificateKind::Exceptional { &ASSUMPTIONS[..1] } else { &ASSUMPTIONS };
    ensure(needed.iter().all(|a| listed.iter().any(|l| l == a)), name, || "assumed ingredients are not all listed".into())?;
    ctx.pass(name);
    Ok(())
}
