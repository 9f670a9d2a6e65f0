/// `C(m, a) mod p` by Lucas' theorem: the product of digit binomials in base p.
pub fn binomial_mod_p(m: u64, a: u64, p: u32) -> u32 {
    if a > m {
        return 0;
    }
    let p64 = p as u64;
    let (mut m, mut a) = (m, a);
    let mut acc = 1u64;
    while a > 0 || m > 0 {
        let (mi, ai) = (m % p64, a % p64);
        if ai > mi {
            return 0;
        }
        acc = acc * small_binomial(mi, ai, p64) % p64;
        m /= p64;
        a /= p64;
    }
    acc as u32
}

// m < p, so the numerator product never contains p
fn small_binomial(m: u64, a: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 0..a {
        num = num * ((m - k) % p) % p;
        den = den * ((k + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}
