#pragma once

// Fixed parameter sets. Each accessor re-validates on every call, so a
// corrupted constant fails loudly instead of producing a weak group.

#include "gkt/group_math.hpp"

namespace gkt::param_sets {

/// p = 23, q = 11, g = 2. Small enough to check by hand.
inline GroupParams tiny() {
    return validate_params(23, 11, 2);
}

/// q = 10007, p = 24q + 1.
inline GroupParams small() {
    return validate_params(from_hex("3aa29"), from_hex("2717"), from_hex("322f3"));
}

/// q = 1048583 (first prime above 2^20). Discrete logs are a linear scan away.
inline GroupParams toy() {
    return validate_params(from_hex("140008d"), from_hex("100007"), from_hex("100000"));
}

/// 1024-bit p, 160-bit q.
inline GroupParams standard() {
    return validate_params(
        from_hex("c0d0198c400114d8daaede7bfce797f5835641ddb51abbe8dcc00b6a47b00c178552be716106c30f"
                 "cbb378775e2681366afb986bb31d29ab046a1560c5de5c15d5bc407157811fab5f25222be1f2f9882a"
                 "fd96d384568bffbe2699435d101b889d68f27053c6632f377f97cedc7c07224b85042f2fc6c5a2933f"
                 "d2935362a11d"),
        from_hex("efd106691dd15f7595161d7b35b2ca15dd0ba61d"),
        from_hex("518e714df8ee79f26363f8520f4162f9728dc56f64f8eedca441276450afc0a518618b2aa5b86f33"
                 "37bc1de8738a156876c006ce591fc5c95a41f7d39485f83a63a8287627d0734e2bf2642191e26e95cb"
                 "5f10a1f0c9ac6afc41b4ef9cec0234e3b7a9363e93343374c5248a446e941f74267c75647ea6551953"
                 "ab6e59eb4a26"));
}

}  // namespace gkt::param_sets
