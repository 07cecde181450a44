#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forestalg {

/// Thrown when a closure or product would exceed its element budget.
class SizeGuardExceeded : public std::runtime_error {
 public:
  explicit SizeGuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Outcome of a table or law check; `detail` names a witness on failure.
struct CheckResult {
  bool ok = true;
  std::string detail;
  explicit operator bool() const { return ok; }
};

/// Finite monoid as a dense multiplication table.
struct FiniteMonoid {
  int size = 0;
  int identity = 0;
  std::vector<int> table;  // row-major: table[a * size + b] = a*b

  int apply(int a, int b) const { return table[a * size + b]; }
  /// a^n by repeated multiplication, n >= 1.
  int power(int a, int n) const;

  bool operator==(const FiniteMonoid&) const = default;
};

/// Checks associativity, identity laws and table bounds.
CheckResult validate_monoid(const FiniteMonoid& m);

/// True iff every element satisfies x^k = x^(k+1) for some k <= size.
bool is_aperiodic(const FiniteMonoid& m);

/// The unique idempotent power of `a`.
int omega_power(const FiniteMonoid& m, int a);

/// The unique idempotent among the multiples a, a+a, ... of an additively
/// written monoid; requires the monoid to be commutative and aperiodic.
int additive_omega_multiple(const FiniteMonoid& h, int a);

/// Expression describing how a transformation arose from named generators.
struct Provenance {
  enum class Kind { Generator, Compose, Add, SelfAdd };
  Kind kind = Kind::Generator;
  std::string generator;              // Kind::Generator
  int repeat = 0;                     // Kind::SelfAdd
  std::vector<Provenance> arguments;  // two for Compose/Add, one for SelfAdd

  static Provenance gen(std::string name);
  static Provenance compose(Provenance f, Provenance g);
  static Provenance add(Provenance f, Provenance g);
  static Provenance self_add(Provenance f, int repeat);
};

std::string to_string(const Provenance& p);

/// Transformation on a finite carrier together with its shortest derivation.
struct Transformation {
  std::vector<int> image;  // carrier index -> carrier index
  Provenance provenance;
};

/// Allowed combination steps for closure_transformations. Pointwise addition
/// 'f+g: x -> f(x)+g(x)' and m-fold self-addition use the carrier monoid.
struct ClosureOps {
  bool compose = true;
  bool pointwise_add = false;
  int self_add_max = 0;  // f -> f+...+f with 2..self_add_max summands
};

/// Closes named generator maps under the requested operations. Breadth-first,
/// deduplicated by image array, keeping the first (shortest) derivation.
/// `carrier` supplies the addition used by the pointwise operations.
std::vector<Transformation> closure_transformations(
    const FiniteMonoid& carrier,
    const std::vector<std::pair<std::string, std::vector<int>>>& generators,
    const ClosureOps& ops, int max_elements = 20000);

/// Views a composition-closed transformation set containing the identity as
/// a monoid; element i is transformations[i].
FiniteMonoid transformation_monoid(const std::vector<Transformation>& transformations,
                                   int carrier_size);

/// Quotient by a partition (block id per element). Fails with a witness when
/// the partition is not a congruence.
struct QuotientResult {
  bool ok = false;
  std::string detail;
  FiniteMonoid quotient;
  std::vector<int> projection;  // element -> block
};

QuotientResult quotient_monoid(const FiniteMonoid& m, const std::vector<int>& block_of);

/// Componentwise product monoid; index coding a * n2 + b.
FiniteMonoid product_monoid(const FiniteMonoid& a, const FiniteMonoid& b);

}  // namespace forestalg
