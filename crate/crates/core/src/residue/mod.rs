//! Integer elements of `A_t`, the commutative ring `U = Z[w]` they contain,
//! residue fields `U / (pi)` and the labelling of their elements by `Z_p`.

mod field;
mod integers;
mod ring;

pub use field::{decode_symbols, encode_symbols, residue_field, ResidueField};
pub use integers::{
    four_square_root, lattice_remainder, round_to_lattice, FourSquareRoot, IntegerElement,
};
pub use ring::{is_prime, make_w, QuadraticRing, UElement, WGenerator};
