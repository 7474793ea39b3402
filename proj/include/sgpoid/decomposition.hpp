#pragma once

// Two-level decompositions of a surjective relational functor phi: S -> T.
//
// The tracing product pairs each top arrow f with its preimages; the kernel
// identifies equivalent preimage sets so that fewer bottom arrows are kept;
// the pinhole cascade composes bottom components through encode/decode maps
// that depend on the top arrows.  Every cascade comes with an emulation
// certificate that is checked, not assumed.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sgpoid/relational.hpp"
#include "sgpoid/report.hpp"
#include "sgpoid/semigroupoid.hpp"
#include "sgpoid/transformation.hpp"

namespace sgpoid {

  enum class Strategy { sets, objects, none };

  std::string to_string(Strategy strategy);

  //! \throws Unsupported for anything but "sets", "objects" or "none".
  Strategy parse_strategy(std::string const& name);

  //! Which member of an equivalence class of preimage sets is kept.
  enum class Representative {
    smallest_min_id,  // the default
    largest_min_id    // used to check that the choice does not matter
  };

  ////////////////////////////////////////////////////////////////////////
  // Emulation
  ////////////////////////////////////////////////////////////////////////

  struct EmulationCertificate {
    RelationalFunctor functor;
    ValidationReport  report;

    [[nodiscard]] bool valid() const noexcept {
      return report.ok();
    }
  };

  //! Compatibility, non-empty composites and pairwise disjoint images.
  EmulationCertificate verify_emulation(RelationalFunctor const& candidate);

  ////////////////////////////////////////////////////////////////////////
  // Tracing product
  ////////////////////////////////////////////////////////////////////////

  struct TracingProduct {
    std::shared_ptr<Semigroupoid const> top;
    std::shared_ptr<Semigroupoid const> bottom;
    std::shared_ptr<Semigroupoid const> product;
    //! (top arrow, bottom arrow) of each product arrow.
    std::vector<std::pair<arrow_id, arrow_id>> pairs;
  };

  struct TracingResult {
    TracingProduct       product;
    EmulationCertificate certificate;
  };

  //! Arrows (f, a) with a in phi^{-1}(f), ordered by f then a, composed
  //! componentwise.  The certificate is a -> {(x, a) : x in phi(a)}.
  //!
  //! \throws ValidationError if phi is invalid or not surjective.
  TracingResult tracing_product(RelationalFunctor const& phi);

  ////////////////////////////////////////////////////////////////////////
  // Interchangeability and equivalence of arrow sets
  ////////////////////////////////////////////////////////////////////////

  //! For f: X -> Y and g: Z -> U, arrows x_xz: X -> Z, x_zx: Z -> X,
  //! x_yu: Y -> U, x_uy: U -> Y with g = x_zx f x_yu, f = x_xz g x_uy and
  //! x_xz x_zx f = f = f x_yu x_uy, x_zx x_xz g = g = g x_uy x_yu.
  struct InterchangeWitness {
    arrow_id x_xz;
    arrow_id x_zx;
    arrow_id x_yu;
    arrow_id x_uy;

    friend bool operator==(InterchangeWitness const&,
                           InterchangeWitness const&) = default;
  };

  bool check_interchange(Semigroupoid const&       s,
                         arrow_id                  f,
                         arrow_id                  g,
                         InterchangeWitness const& w);

  //! The first witness in lexicographic order of (x_xz, x_zx, x_yu, x_uy).
  std::optional<InterchangeWitness>
  interchangeable(Semigroupoid const& s, arrow_id f, arrow_id g);

  //! f in S^1 g S^1 and g in S^1 f S^1.
  //!
  //! \throws Unsupported if s has more than one object.
  bool d_relation(Semigroupoid const& s, arrow_id f, arrow_id g);

  //! An object bijection sigma between the objects supporting P and Q, with
  //! arrows t_{X -> sigma X} (forward) and t_{sigma X -> X} (backward).  An
  //! empty optional stands for an identity and only occurs when sigma X = X.
  //! P is carried onto Q by p -> backward[dom p] p forward[cod p].
  struct SetEquivalenceWitness {
    std::vector<object_id>               domain;  // objects of P, sorted
    std::vector<object_id>               sigma;   // parallel to domain
    std::vector<std::optional<arrow_id>> forward;
    std::vector<std::optional<arrow_id>> backward;
    //! (p, conjugate of p), sorted by p.
    std::vector<std::pair<arrow_id, arrow_id>> bijection;

    [[nodiscard]] bool is_identity() const;
  };

  //! The witness with identity families on the objects of p.
  SetEquivalenceWitness identity_witness(Semigroupoid const& s,
                                         ArrowSet const&     p);

  //! The conjugate of p under w, if every composite exists.
  std::optional<arrow_id> conjugate(Semigroupoid const&          s,
                                    SetEquivalenceWitness const& w,
                                    arrow_id                     p);

  //! Recomputes everything a witness claims: sigma is a bijection onto the
  //! objects of q, the families are typed and act as identities on every
  //! arrow of p and q they compose with, and conjugation carries p onto q
  //! and back.  On success the bijection of \p w is (re)filled.
  bool check_set_equivalence(Semigroupoid const&    s,
                             ArrowSet const&        p,
                             ArrowSet const&        q,
                             SetEquivalenceWitness& w);

  //! Exhaustive search, lexicographic over sigma and then arrow ids.
  std::optional<SetEquivalenceWitness>
  preimage_sets_equivalent(Semigroupoid const& s,
                           ArrowSet const&     p,
                           ArrowSet const&     q);

  //! Witness for p -> r from witnesses for p -> q and q -> r, if the family
  //! composites exist.  Not checked.
  std::optional<SetEquivalenceWitness>
  compose_witnesses(Semigroupoid const&          s,
                    SetEquivalenceWitness const& pq,
                    SetEquivalenceWitness const& qr);

  //! Witness for q -> p from one for p -> q.  Not checked.
  SetEquivalenceWitness invert_witness(SetEquivalenceWitness const& pq);

  ////////////////////////////////////////////////////////////////////////
  // Object isomorphisms
  ////////////////////////////////////////////////////////////////////////

  //! Objects X, Y are identified when there are u: X -> Y and v: Y -> X such
  //! that uv and vu act as identities on all arrows of s at X and at Y.
  //! Classes are formed greedily, the smallest object id representing.
  struct ObjectClasses {
    std::vector<object_id> representative;
    //! rep(X) -> X and X -> rep(X); empty for representatives.
    std::vector<std::optional<arrow_id>> from_rep;
    std::vector<std::optional<arrow_id>> to_rep;
  };

  ObjectClasses object_isomorphism_classes(Semigroupoid const& s);

  ////////////////////////////////////////////////////////////////////////
  // Kernel and codec
  ////////////////////////////////////////////////////////////////////////

  struct TopArrowCodec {
    arrow_id    top = 0;
    std::size_t klass = 0;
    //! (source arrow in phi^{-1}(top), encoded host arrow), sorted by source.
    std::vector<std::pair<arrow_id, arrow_id>> table;
  };

  //! enc_f carries phi^{-1}(f) into the host semigroupoid, dec_f carries it
  //! back.  The host is the source of phi unless the kernel was built from
  //! a transformation-level morphism, in which case it is the pinhole typing.
  struct Codec {
    std::shared_ptr<Semigroupoid const> source;
    std::shared_ptr<Semigroupoid const> host;
    std::vector<TopArrowCodec>          tops;  // indexed by top arrow
  };

  //! \throws ScopeError if a is not in phi^{-1}(f).
  arrow_id encode(Codec const& c, arrow_id f, arrow_id a);

  //! \throws ScopeError if h is not an encoded arrow of f.
  arrow_id decode(Codec const& c, arrow_id f, arrow_id h);

  //! dec_f(enc_f(a)) = a and enc_f(dec_f(h)) = h for every f and every arrow
  //! in scope.
  ValidationReport check_codec(Codec const& c);

  struct KernelClass {
    std::vector<arrow_id> tops;
    arrow_id              representative;  // a member of tops
    ArrowSet              arrows;          // in the host
    //! Witness carrying phi^{-1}(top) onto the representative set, per
    //! member of tops ("sets" only).
    std::vector<SetEquivalenceWitness> witnesses;
  };

  struct Kernel {
    Strategy                 strategy = Strategy::none;
    std::vector<KernelClass> classes;
    Codec                    codec;
    //! The pinhole typing whose abstract semigroupoid is the host, when the
    //! kernel was built at transformation level.
    std::shared_ptr<TransformationSemigroupoid const> host_ts;
    std::vector<std::string>                          notes;

    //! Sum of class sizes (preimages may overlap, so this can exceed the
    //! number of source arrows).
    [[nodiscard]] std::size_t arrow_count() const;
    //! Union of the class arrow sets.
    [[nodiscard]] ArrowSet arrows() const;
    //! Number of states on the objects touched by the kernel arrows, if the
    //! host is concrete.
    [[nodiscard]] std::optional<std::size_t> state_count() const;
  };

  //! \throws ValidationError if phi is invalid or not surjective.
  Kernel build_kernel(RelationalFunctor const& phi,
                      Strategy                 strategy,
                      Representative rule = Representative::smallest_min_id);

  //! As above; with Strategy::objects the objects being identified are the
  //! pinhole preimages pre(y), which is where compression can happen for
  //! one-object sources.
  Kernel build_kernel(RelationalMorphismTS const& m,
                      Strategy                    strategy,
                      Representative rule = Representative::smallest_min_id);

  ////////////////////////////////////////////////////////////////////////
  // Cascades
  ////////////////////////////////////////////////////////////////////////

  struct Cascade {
    std::shared_ptr<Semigroupoid const> top;
    std::shared_ptr<Semigroupoid const> host;
    std::shared_ptr<Semigroupoid const> product;
    //! (top arrow, host arrow) of each product arrow.
    std::vector<std::pair<arrow_id, arrow_id>> pairs;

    [[nodiscard]] std::optional<arrow_id> find(arrow_id f, arrow_id h) const;
  };

  struct CascadeResult {
    Cascade              cascade;
    EmulationCertificate certificate;
  };

  //! Arrows (f, h) for h in the kernel class of f, composed by
  //! (f, a)(g, b) = (fg, enc_fg(dec_f(a) dec_g(b))).  The certificate is
  //! a -> {(f, enc_f(a)) : f in phi(a)}; its report also carries codec and
  //! semigroupoid defects of the product.
  CascadeResult pinhole_cascade(RelationalFunctor const& phi, Kernel const& k);

  struct RuleCell {
    arrow_id top_left;
    arrow_id top_right;
    arrow_id top_result;
    //! (a, b, bottom component of (top_left, a)(top_right, b)).
    std::vector<std::tuple<arrow_id, arrow_id, arrow_id>> entries;
    //! k with result = a b k for every entry, the first such in id order.
    std::optional<arrow_id> carry;
  };

  //! One cell per composable pair of top arrows, in (left, right) order.
  std::vector<RuleCell> rule_table(Cascade const& c);

  //! Arrows (f, a) for all f in top and a in bottom, ordered by f then a,
  //! with (f, a)(g, b) = (fg, a b k) where k = carries(f, g).  Both operands
  //! must be one-object.
  //!
  //! \throws Unsupported for several objects; StructuralError if a carry is
  //! missing.
  Cascade cascade_from_rule_table(
      std::shared_ptr<Semigroupoid const>                 top,
      std::shared_ptr<Semigroupoid const>                 bottom,
      std::map<std::pair<arrow_id, arrow_id>, arrow_id> const& carries);

  //! Order of (f, a) in a one-object product: the number of distinct powers.
  std::size_t order(Semigroupoid const& s, arrow_id f);

  ////////////////////////////////////////////////////////////////////////
  // Pipeline
  ////////////////////////////////////////////////////////////////////////

  struct Decomposition {
    RelationalFunctor     phi;
    Kernel                kernel;
    TracingResult         tracing;
    CascadeResult         cascade;
    std::vector<RuleCell> rules;

    //! The cascade has the same arrows and table as the tracing product.
    [[nodiscard]] bool reverts_to_tracing_product() const;
    //! The kernel has fewer arrows than the preimages together.
    [[nodiscard]] bool compressed() const;
  };

  Decomposition decompose(RelationalFunctor const& phi,
                          Strategy                 strategy,
                          Representative rule = Representative::smallest_min_id);

  Decomposition decompose(RelationalMorphismTS const& m,
                          Strategy                    strategy,
                          Representative rule = Representative::smallest_min_id);

}  // namespace sgpoid
