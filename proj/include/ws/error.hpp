#pragma once

#include <stdexcept>
#include <string>

namespace ws {

enum class errc {
    not_prime,
    even_characteristic,
    reducible_modulus,
    zero_input,
    constant_polynomial,
    zero_polynomial,
    division_by_zero,
    unsupported_depth,
    field_mismatch,
    non_unit,
    unsupported_base,
    zero_entry,
    empty_form,
    zero_scalar,
    no_unit_entry,
    dimension_one,
    unsupported_residue_field,
    unsupported_reorder,
    isotropic_input,
    missing_mandatory_entries,
    dimension_out_of_range,
    square_alpha,
    non_square_constant_term,
    unverified_anisotropy_hypothesis,
    mandatory_subform_missing,
    dimension_too_small,
    square_product,
    chain_absent,
    syntax_error,
    unknown_variable,
    bad_order,
    internal_error,
};

const char* errc_name(errc c);

/// Exception carrying a structured error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace ws
