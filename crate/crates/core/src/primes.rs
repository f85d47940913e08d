//! Small prime helpers; every group order in this crate is a prime.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n + 1;
    while !is_prime(k) {
        k += 1;
    }
    k
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&k| is_prime(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(next_prime(2), 3);
        assert_eq!(next_prime(23), 29);
        assert_eq!(next_prime(0), 2);
        assert!(!is_prime(1));
        assert!(is_prime(7919));
    }
}
