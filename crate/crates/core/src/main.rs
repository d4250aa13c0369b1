// SPDX-License-Identifier: Apache-2.0

fn main() {
    let code = citenet::cli::dispatch(std::env::args_os());
    std::process::exit(code);
}
