#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace bregman {

/// A point of R^d. Primal and dual points share this type since the dual of
/// R^d is identified with R^d. Storage is inline for d <= 4 so the 1-D
/// iteration never touches the heap.
using Vector = boost::container::small_vector<double, 4>;

inline Vector make_vector(std::span<const double> xs) { return Vector(xs.begin(), xs.end()); }
inline Vector make_vector(std::initializer_list<double> xs) { return Vector(xs.begin(), xs.end()); }
inline Vector zeros(std::size_t d) { return Vector(d, 0.0); }
inline std::vector<double> to_std(const Vector& v) { return {v.begin(), v.end()}; }

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double distance(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

/// Throws DomainError unless every coordinate is finite.
void require_finite(const Vector& v, const char* what);
void require_same_dim(const Vector& a, const Vector& b, const char* what);

std::string to_string(const Vector& v);

}  // namespace bregman
