#pragma once

#include <functional>

#include "doctest.h"
#include "gwleaf/error.hpp"

// Code of the gwleaf::Error thrown by f; fails the test when nothing is thrown.
inline gwleaf::Errc error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const gwleaf::Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return gwleaf::Errc::DomainError;
}
