//! Dirichlet characters modulo m: enumeration, parity, primitivity,
//! conductor, and Gauss sums.
//!
//! Characters are represented by exponent vectors on a fixed canonical
//! generator list of the unit group (ℤ/mℤ)*, so equality, conjugation,
//! multiplicativity and parity are exact operations on rationals; complex
//! values are realized on demand. The enumeration order is lexicographic in
//! the exponent vector over the canonical generator list (index 0 is the
//! principal character), which is the stable order the CLI exposes.

use crate::error::{Error, Result};
use crate::numeric::{check_precision, CNum, Rational};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(n: u32) -> u32 {
    factorize(n)
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product::<u32>()
        .max(1)
}

/// Multiplicative order of a modulo n (gcd(a, n) = 1 assumed).
fn order_mod(a: u64, n: u64, phi: u64) -> u64 {
    let mut divisors: Vec<u64> = Vec::new();
    let mut d = 1;
    while d * d <= phi {
        if phi.is_multiple_of(d) {
            divisors.push(d);
            divisors.push(phi / d);
        }
        d += 1;
    }
    divisors.sort_unstable();
    for d in divisors {
        if pow_mod(a, d, n) == 1 {
            return d;
        }
    }
    phi
}

/// A primitive root mod p^e for odd prime p (brute-force search, lifted
/// from mod p when necessary).
fn primitive_root_odd_prime_power(p: u32, e: u32) -> u64 {
    let pe = (p as u64).pow(e);
    let phi_p = (p - 1) as u64;
    let mut g = 2u64;
    loop {
        if gcd(g, p as u64) == 1 && order_mod(g, p as u64, phi_p) == phi_p {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    // lift: g is a primitive root mod p^e unless g^{p−1} ≡ 1 (mod p²)
    let p2 = (p as u64) * (p as u64);
    if pow_mod(g, phi_p, p2) == 1 {
        g += p as u64;
    }
    g % pe
}

/// One cyclic factor of the unit group, with its generator mapped into
/// (ℤ/mℤ)* by the Chinese remainder theorem.
#[derive(Clone, Debug)]
struct CyclicFactor {
    generator: u64,
    order: u32,
}

/// Canonical cyclic decomposition of (ℤ/mℤ)*. Prime-power factors in
/// ascending prime order; powers of two contribute (−1, 5) for 2^e, e ≥ 3.
fn unit_group_factors(m: u32) -> Vec<CyclicFactor> {
    let m64 = m as u64;
    let mut locals: Vec<(u64, Vec<(u64, u32)>)> = Vec::new(); // (p^e, [(gen mod p^e, order)])
    for (p, e) in factorize(m) {
        let pe = (p as u64).pow(e);
        if p == 2 {
            match e {
                1 => locals.push((pe, vec![])),
                2 => locals.push((pe, vec![(3, 2)])),
                _ => locals.push((
                    pe,
                    vec![(pe - 1, 2), (5, 2u32.pow(e - 2))],
                )),
            }
        } else {
            let g = primitive_root_odd_prime_power(p, e);
            let order = (p - 1) * p.pow(e - 1);
            locals.push((pe, vec![(g, order)]));
        }
    }
    // CRT-lift each local generator to a mod-m unit that is 1 in the other
    // coordinates.
    let mut out = Vec::new();
    for (pe, gens) in &locals {
        let rest = m64 / pe;
        for &(g, order) in gens {
            let mut lifted = 0u64;
            for candidate in 0..m64 {
                if candidate % pe == g % pe && (rest == 1 || candidate % rest == 1 % rest) {
                    lifted = candidate;
                    break;
                }
            }
            out.push(CyclicFactor {
                generator: lifted,
                order,
            });
        }
    }
    out
}

/// A Dirichlet character mod m, stored as exponents on the canonical
/// generators; χ(g_i) = e^{2πi·k_i/d_i}.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u32,
    exponents: Vec<u32>,
    orders: Vec<u32>,
    /// index j ↦ exact phase q with χ(j) = e^{2πiq}, or None off the units
    phases: Vec<Option<Rational>>,
    parity_even: bool,
    conductor: u32,
    index: usize,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Position in the canonical enumeration for this modulus.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Exact phase of χ(j): χ(j) = e^{2πi·phase}; None when gcd(j, m) > 1.
    pub fn phase(&self, j: i64) -> Option<Rational> {
        let idx = j.rem_euclid(self.modulus as i64) as usize;
        self.phases[idx].clone()
    }

    /// χ(j) as a complex value at the given precision (0 off the units).
    pub fn value(&self, j: i64, precision_bits: u32) -> CNum {
        match self.phase(j) {
            Some(q) => CNum::unit_phase(&q, precision_bits),
            None => CNum::zero(precision_bits),
        }
    }

    /// Even means χ(−1) = 1.
    pub fn is_even(&self) -> bool {
        self.parity_even
    }

    pub fn is_odd(&self) -> bool {
        !self.parity_even
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// True iff every value is real (χ² principal).
    pub fn is_real(&self) -> bool {
        self.exponents
            .iter()
            .zip(&self.orders)
            .all(|(&k, &d)| (2 * k) % d == 0)
    }

    /// Smallest f | m such that χ factors through (ℤ/fℤ)*.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Primitive iff the conductor equals the modulus.
    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// The complex-conjugate character (exponents negated).
    pub fn conjugate(&self) -> DirichletCharacter {
        let exponents: Vec<u32> = self
            .exponents
            .iter()
            .zip(&self.orders)
            .map(|(&k, &d)| if k == 0 { 0 } else { d - k })
            .collect();
        let phases = self
            .phases
            .iter()
            .map(|p| p.as_ref().map(|q| -q.clone()))
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            exponents,
            orders: self.orders.clone(),
            phases,
            parity_even: self.parity_even,
            conductor: self.conductor,
            index: usize::MAX, // not an enumeration member by construction
        }
    }
}

/// All φ(m) characters mod m in the canonical (lexicographic) order.
pub fn enumerate_characters(m: u32) -> Result<Vec<DirichletCharacter>> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "character enumeration requires m >= 2".into(),
        ));
    }
    let factors = unit_group_factors(m);
    let orders: Vec<u32> = factors.iter().map(|f| f.order).collect();
    let phi = euler_phi(m) as usize;

    // discrete logs: enumerate all exponent tuples, multiply out
    let mut dlog: Vec<Option<Vec<u32>>> = vec![None; m as usize];
    let mut tuple = vec![0u32; factors.len()];
    loop {
        let mut residue = 1u64;
        for (f, &t) in factors.iter().zip(&tuple) {
            residue = residue * pow_mod(f.generator, t as u64, m as u64) % m as u64;
        }
        dlog[residue as usize] = Some(tuple.clone());
        // increment mixed-radix counter
        let mut pos = factors.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < orders[pos] {
                break;
            }
            tuple[pos] = 0;
            if pos == 0 {
                break;
            }
        }
        if tuple.iter().all(|&t| t == 0) {
            break;
        }
    }
    debug_assert_eq!(dlog.iter().filter(|d| d.is_some()).count(), phi);

    // lexicographic enumeration of characters
    let mut out = Vec::with_capacity(phi);
    let mut exps = vec![0u32; factors.len()];
    let mut index = 0usize;
    loop {
        out.push(build_character(m, &exps, &orders, &dlog, index));
        index += 1;
        // lexicographic increment: last coordinate fastest
        let mut pos = factors.len();
        let mut carried = true;
        while carried && pos > 0 {
            pos -= 1;
            exps[pos] += 1;
            if exps[pos] < orders[pos] {
                carried = false;
            } else {
                exps[pos] = 0;
            }
        }
        if carried {
            break;
        }
    }
    debug_assert_eq!(out.len(), phi);
    Ok(out)
}

fn build_character(
    m: u32,
    exponents: &[u32],
    orders: &[u32],
    dlog: &[Option<Vec<u32>>],
    index: usize,
) -> DirichletCharacter {
    let phases: Vec<Option<Rational>> = (0..m as usize)
        .map(|j| {
            dlog[j].as_ref().map(|tuple| {
                let mut q = Rational::from(0);
                for ((&k, &t), &d) in exponents.iter().zip(tuple).zip(orders) {
                    q += Rational::from((k as u64 * t as u64, d as u64));
                }
                // reduce mod 1 for a canonical representative
                crate::numeric::reduce_mod(&q, 1)
            })
        })
        .collect();
    let parity_even = match &phases[(m - 1) as usize] {
        Some(q) => *q == 0,
        None => true, // m = 2: −1 ≡ 1
    };
    let conductor = conductor_of(m, &phases);
    DirichletCharacter {
        modulus: m,
        exponents: exponents.to_vec(),
        orders: orders.to_vec(),
        phases,
        parity_even,
        conductor,
        index,
    }
}

/// Conductor: the smallest divisor f of m with χ(a) = 1 for every unit
/// a ≡ 1 (mod f).
fn conductor_of(m: u32, phases: &[Option<Rational>]) -> u32 {
    let mut divisors: Vec<u32> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    'outer: for f in divisors {
        for a in (0..m as usize).filter(|&a| phases[a].is_some()) {
            if a as u32 % f == 1 % f {
                if let Some(q) = &phases[a] {
                    if *q != 0 {
                        continue 'outer;
                    }
                }
            }
        }
        return f;
    }
    m
}

/// Gauss sum τ(χ) = Σ_{r=0}^{m−1} χ(r)·e^{2πir/m}.
pub fn gauss_sum(chi: &DirichletCharacter, precision_bits: u32) -> Result<CNum> {
    let p = check_precision(precision_bits)?;
    let m = chi.modulus();
    let mut acc = CNum::zero(p);
    for r in 0..m as i64 {
        if let Some(q) = chi.phase(r) {
            let total = &q + Rational::from((r, m as i64));
            acc = acc.add(&CNum::unit_phase(&total, p));
        }
    }
    Ok(acc)
}

/// Report of one twisted-sum identity check
/// Σ_r χ(r)·e^{2πirj/m} = χ̄(j)·τ(χ) (primitive χ).
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub j: i64,
    pub lhs: CNum,
    pub rhs: CNum,
    pub delta: rug::Float,
}

/// Verify the Gauss twisted-sum identity at one j (primitive χ only).
pub fn twisted_sum_identity_check(
    chi: &DirichletCharacter,
    j: i64,
    precision_bits: u32,
) -> Result<IdentityReport> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    let p = check_precision(precision_bits)?;
    let m = chi.modulus();
    let mut lhs = CNum::zero(p);
    for r in 0..m as i64 {
        if let Some(q) = chi.phase(r) {
            let mut tw = Rational::from(r) * Rational::from(j);
            tw /= Rational::from(m);
            let total = Rational::from(&q + &tw);
            lhs = lhs.add(&CNum::unit_phase(&total, p));
        }
    }
    let tau = gauss_sum(chi, p)?;
    let rhs = chi.conjugate().value(j, p).mul(&tau);
    let delta = lhs.sub(&rhs).abs();
    Ok(IdentityReport { j, lhs, rhs, delta })
}
