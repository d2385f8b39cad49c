//! Seeded random inputs for round-trip and property experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constfield::ConstExpr;
use crate::expoly::ExpoPoly;
use crate::ratfun::{Poly, RatFun};

/// Data for `w = H e^{dz} + r` together with an equation coefficient `a`.
#[derive(Clone, Debug)]
pub struct InvertCase {
    pub h: Poly,
    pub d: ConstExpr,
    pub r: RatFun,
    pub a: RatFun,
}

/// Coefficients of the linear reduced form.
#[derive(Clone, Debug)]
pub struct LinearCase {
    pub a: RatFun,
    pub a1: RatFun,
    pub a0: RatFun,
}

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Corpus {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn nonzero_int(&mut self, bound: i64) -> i64 {
        let k = self.small_int(1, bound);
        if self.rng.gen_bool(0.5) {
            k
        } else {
            -k
        }
    }

    /// Gaussian rational with small parts.
    pub fn coefficient(&mut self) -> ConstExpr {
        let re =
            ConstExpr::rational(self.small_int(-4, 4), self.small_int(1, 3)).expect("nonzero den");
        if self.rng.gen_bool(0.3) {
            &re + &(ConstExpr::int(self.small_int(-2, 2)) * ConstExpr::i())
        } else {
            re
        }
    }

    /// Polynomial of degree exactly `deg` with a nonzero leading coefficient.
    pub fn poly(&mut self, deg: usize) -> Poly {
        let mut cs: Vec<ConstExpr> = (0..deg).map(|_| self.coefficient()).collect();
        cs.push(ConstExpr::int(self.nonzero_int(3)));
        Poly::new(cs)
    }

    fn poly_upto(&mut self, max: usize) -> Poly {
        let deg = self.rng.gen_range(0..=max);
        self.poly(deg)
    }

    fn monic_upto(&mut self, max: usize) -> Poly {
        let deg = self.rng.gen_range(0..=max);
        self.monic_poly(deg)
    }

    pub fn monic_poly(&mut self, deg: usize) -> Poly {
        let mut cs: Vec<ConstExpr> = (0..deg)
            .map(|_| ConstExpr::int(self.small_int(-3, 3)))
            .collect();
        cs.push(ConstExpr::one());
        Poly::new(cs)
    }

    /// Nonzero rational function of low degree.
    pub fn ratfun(&mut self) -> RatFun {
        let n = self.poly_upto(2);
        let d = self.monic_upto(1);
        RatFun::new(n, d).expect("monic denominator")
    }

    /// Nonzero frequency from a mix of real, imaginary and complex values.
    pub fn frequency(&mut self) -> ConstExpr {
        let pi_i = ConstExpr::pi() * ConstExpr::i();
        match self.rng.gen_range(0..4) {
            0 => ConstExpr::int(self.nonzero_int(2)),
            1 => &ConstExpr::rational(self.nonzero_int(4), 2).expect("nonzero den") * &pi_i,
            2 => ConstExpr::int(self.nonzero_int(2)) * ConstExpr::i(),
            _ => {
                &ConstExpr::int(self.nonzero_int(2)) + &(ConstExpr::int(self.nonzero_int(2)) * pi_i)
            }
        }
    }

    pub fn invert_case(&mut self) -> InvertCase {
        let h = self.poly_upto(2);
        let d = self.frequency();
        let r = if self.rng.gen_bool(0.3) {
            RatFun::zero()
        } else {
            RatFun::from_poly(self.poly_upto(2))
        };
        InvertCase {
            h,
            d,
            r,
            a: self.ratfun(),
        }
    }

    /// Linear-form coefficients with polynomial `a1`: a third planted to have
    /// solutions, a third with a planted amplitude of degree 2 or 3, the rest random.
    pub fn linear_case(&mut self) -> LinearCase {
        let a = self.ratfun();
        let one = ConstExpr::one();
        let pi_i = ConstExpr::pi() * ConstExpr::i();
        match self.rng.gen_range(0..3) {
            0 => {
                let (h, d, a1) = if self.rng.gen_bool(0.5) {
                    let d = self.frequency();
                    let a1 = &d.exp().expect("shallow") - &(-&d).exp().expect("shallow");
                    (Poly::one(), d, RatFun::constant(a1))
                } else {
                    let sign = *[1i64, -1].choose(&mut self.rng).expect("nonempty");
                    let k = self.small_int(-1, 1);
                    let p = ConstExpr::rational(4 * k + sign, 2).expect("nonzero den");
                    let h = Poly::new(vec![self.coefficient(), one.clone()]);
                    (
                        h,
                        &p * &pi_i,
                        RatFun::constant(ConstExpr::int(2 * sign) * ConstExpr::i()),
                    )
                };
                LinearCase {
                    a0: self.planted_a0(&a, &h, &d),
                    a,
                    a1,
                }
            }
            1 => {
                let deg = self.rng.gen_range(2..=3);
                let h = self.monic_poly(deg);
                let d = self.frequency();
                let a1 = RatFun::from_poly(self.poly_upto(1));
                LinearCase {
                    a0: self.planted_a0(&a, &h, &d),
                    a,
                    a1,
                }
            }
            _ => {
                let a1 = RatFun::from_poly(self.poly_upto(2));
                LinearCase {
                    a0: self.ratfun(),
                    a,
                    a1,
                }
            }
        }
    }

    /// `a (H'/H + d)`.
    fn planted_a0(&mut self, a: &RatFun, h: &Poly, d: &ConstExpr) -> RatFun {
        let hr = RatFun::from_poly(h.clone());
        let f = hr
            .derivative()
            .and_then(|dh| dh.div(&hr))
            .expect("H nonzero");
        a.mul(&f.add(&RatFun::constant(d.clone())).expect("exact"))
            .expect("exact")
    }

    /// Entire exponential polynomial with one to three terms and small frequencies.
    pub fn expopoly(&mut self) -> ExpoPoly {
        let pi_i = ConstExpr::pi() * ConstExpr::i();
        let freqs = [
            ConstExpr::zero(),
            ConstExpr::one(),
            ConstExpr::int(-1),
            ConstExpr::i(),
            pi_i.clone(),
            ConstExpr::int(2) * pi_i,
            &ConstExpr::one() + &ConstExpr::i(),
        ];
        let n = self.rng.gen_range(1..=3);
        let mut f = ExpoPoly::zero();
        for _ in 0..n {
            let d = freqs.choose(&mut self.rng).expect("nonempty").clone();
            let h = RatFun::from_poly(self.poly_upto(2));
            f = f
                .add(&ExpoPoly::term(d, h).expect("polynomial"))
                .expect("exact");
        }
        if f.is_empty() {
            ExpoPoly::exp(ConstExpr::one()).expect("shallow")
        } else {
            f
        }
    }

    pub fn unit_point(&mut self, radius: f64) -> num_complex::Complex64 {
        num_complex::Complex64::new(
            self.rng.gen_range(-radius..radius),
            self.rng.gen_range(-radius..radius),
        )
    }
}
