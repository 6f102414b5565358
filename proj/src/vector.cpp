#include "bregman/vector.hpp"

#include <cstdio>

#include "bregman/errors.hpp"

namespace bregman {

double dot(const Vector& a, const Vector& b)
{
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double distance(const Vector& a, const Vector& b)
{
    require_same_dim(a, b, "distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vector operator+(const Vector& a, const Vector& b)
{
    require_same_dim(a, b, "operator+");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector operator-(const Vector& a, const Vector& b)
{
    require_same_dim(a, b, "operator-");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector operator*(double s, const Vector& a)
{
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

void require_finite(const Vector& v, const char* what)
{
    if (v.empty()) throw DomainError(std::string(what) + ": empty vector");
    for (double c : v)
        if (!std::isfinite(c)) throw DomainError(std::string(what) + ": non-finite coordinate in " + to_string(v));
}

void require_same_dim(const Vector& a, const Vector& b, const char* what)
{
    if (a.size() != b.size())
        throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
}

std::string to_string(const Vector& v)
{
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", v[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + ")";
}

}  // namespace bregman
