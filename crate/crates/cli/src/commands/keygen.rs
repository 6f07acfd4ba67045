//! `provchain keygen [--seed HEX]`

use provchain_core::curve_crypto::{keygen, OsEntropy, SeedEntropy, SECP256K1};

use super::CliError;

pub fn run(seed: Option<&str>) -> Result<(), CliError> {
    let curve = &*SECP256K1;
    let keypair = match seed {
        Some(hex_seed) => {
            let raw = hex::decode(hex_seed)
                .map_err(|_| CliError::usage("--seed must be hex"))?;
            let seed: [u8; 32] = raw
                .try_into()
                .map_err(|_| CliError::usage("--seed must be exactly 32 bytes of hex"))?;
            keygen(&mut SeedEntropy::new(seed), curve)
        }
        None => keygen(&mut OsEntropy, curve),
    }
    .map_err(|e| CliError::usage(format!("key generation failed: {e}")))?;

    let (x, y) = keypair
        .public_key()
        .coordinates()
        .expect("generated keys are finite");
    println!("private_key: {}", keypair.private_key().to_hex());
    println!("public_key_x: {}", x.to_hex());
    println!("public_key_y: {}", y.to_hex());
    println!("address: {}", keypair.address().to_hex());
    Ok(())
}
