//! Finite fields GF(p^k) and polynomial arithmetic over them.

mod enumerate;
mod field;
mod poly;

pub use enumerate::{
    enumerate_irreducibles, irreducibles_of_degree, order_block, Ordering, PolynomialRecord,
};
pub use field::{is_prime, prime_power, Digit, Field, MAX_ORDER};
pub use poly::Polynomial;

pub(crate) use enumerate::gf2_rem;
