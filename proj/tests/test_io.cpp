#include <doctest.h>

#include "quadfr/io.hpp"

using namespace quadfr;

TEST_CASE("git blob hash") {
  // git hash-object of an empty file and of "hello\n".
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("operator hash is deterministic and sensitive to the operators") {
  const auto a = make_operators(BasisKind::total, 2);
  const auto b = make_operators(BasisKind::total, 2);
  const auto c = make_operators(BasisKind::total, 3);
  CHECK(operator_hash(*a) == operator_hash(*b));
  CHECK(operator_hash(*a) != operator_hash(*c));
  CHECK(operator_hash(*a).size() == 40);
  const SchemeInstance dg = dg_scheme(a);
  CHECK(operator_hash(*a, &dg) != operator_hash(*a));
}

TEST_CASE("operator JSON round-trips doubles") {
  const auto ops = make_operators(BasisKind::euclidean, 2);
  const auto j = operators_json(*ops);
  const auto text = j.dump();
  const auto back = nlohmann::json::parse(text);
  for (Eigen::Index r = 0; r < ops->Dx.rows(); ++r)
    for (Eigen::Index c = 0; c < ops->Dx.cols(); ++c)
      CHECK(back["matrices"]["Dx"][r][c].get<double>() == ops->Dx(r, c));
  CHECK(back["metadata"]["n_sol"] == ops->n_sol());
  CHECK(back["metadata"]["operator_hash"] == operator_hash(*ops));
}

TEST_CASE("operator CSV") {
  const auto ops = make_operators(BasisKind::maximal, 2);
  const std::string csv = operators_csv(*ops);
  CHECK(csv.find("# basis: max_k2") != std::string::npos);
  CHECK(csv.find("matrix,row,col,value\n") != std::string::npos);
  CHECK(csv.find("# operator_hash: " + operator_hash(*ops)) != std::string::npos);
}

TEST_CASE("family JSON") {
  const auto ops = make_operators(BasisKind::total, 2);
  const auto fam = derive_q_family(*ops);
  const auto j = family_json(fam, *ops);
  CHECK(j["n_params"] == 3);
  CHECK(j["reference_family"] == "tot_k2");
  CHECK(j["inequalities"].size() == 3);
  CHECK(j["inequality_check"]["agreement_with_cholesky"] == j["inequality_check"]["samples"]);
}

TEST_CASE("manifest") {
  const auto m = make_manifest("solve", {{"k", 3}});
  CHECK(m["tool"] == "quadfr");
  CHECK(m["command"] == "solve");
  CHECK(m["config"]["k"] == 3);
}
