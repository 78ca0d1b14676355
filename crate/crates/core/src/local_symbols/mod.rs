//! Hilbert symbols, characters of `Q_p`, Gauss sums and Weil indices.

mod characters;
mod gauss;
mod hilbert;
mod weil;

pub use characters::{
    chi_b, unit_generator, AdditiveChar, MultChar, MultCharJson, Rotation, UnramifiedJson,
};
pub(crate) use characters::rotation_to_complex;
pub use gauss::gauss_sum;
pub use hilbert::{hilbert, hilbert_oracle};
pub use weil::{mu_psi, weil_index, WeilIndex};
