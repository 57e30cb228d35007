/// Linear sieve over `[0, n]` recording smallest prime factors and Euler's totient.
pub struct TotientSieve {
    spf: Vec<u32>,
    phi: Vec<u32>,
    primes: Vec<u32>,
}

impl TotientSieve {
    pub fn new(n: u32) -> Self {
        let len = n as usize + 1;
        let mut spf = vec![0u32; len];
        let mut phi = vec![0u32; len];
        let mut primes = Vec::new();
        if len > 1 {
            phi[1] = 1;
        }
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let j = i * p as usize;
                if p > spf[i] || j >= len {
                    break;
                }
                spf[j] = p;
                phi[j] = if p == spf[i] {
                    phi[i] * p
                } else {
                    phi[i] * (p - 1)
                };
            }
        }
        Self { spf, phi, primes }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn phi(&self, n: u32) -> u32 {
        self.phi[n as usize]
    }

    pub fn phis(&self) -> &[u32] {
        &self.phi
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// `(prime, exponent)` pairs of `n >= 1`, increasing in prime.
    pub fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            match out.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => out.push((p, 1)),
            }
            n /= p;
        }
        out
    }
}
