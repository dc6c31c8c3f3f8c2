#include <doctest.h>

#include <cctype>
#include <random>

#include "test_support.hpp"
#include "trustwire/agencynode.hpp"
#include "trustwire/errors.hpp"

using namespace trustwire;
using trustwire::testing::world;

namespace {

constexpr std::string_view kGoldenPassword = "nzIlBLjTMey2";

std::unique_ptr<AgencyNode> make_node(const std::string& id) {
  const auto& w = world();
  const AgencyId me(id);
  NodeConfig cfg{me, w.key(id), w.registry, {}, w.store(id), w.scenario.agency(me)->node_seed,
                 w.scenario.general_user_trust};
  for (const auto& t : w.scenario.trust) {
    if (t.source == me || t.target == me) cfg.trust.add(t);
  }
  return std::make_unique<AgencyNode>(std::move(cfg));
}

}  // namespace

TEST_CASE("user registration") {
  auto fbi = make_node("FBI");
  const std::string password = fbi->register_user("analyst7");
  CHECK(password.size() == 12);
  for (char c : password) CHECK(std::isalnum(static_cast<unsigned char>(c)));
  CHECK(fbi->verify_password("analyst7", password));
  CHECK_FALSE(fbi->verify_password("analyst7", password + "x"));
  CHECK_FALSE(fbi->verify_password("nobody", password));
  CHECK_THROWS_AS(fbi->register_user("analyst7"), DuplicateUserError);
  CHECK_THROWS_AS(fbi->register_user(""), InvalidArgumentError);
  CHECK_THROWS_AS(fbi->register_user("two words"), InvalidArgumentError);

  const auto& account = fbi->accounts().at("analyst7");
  CHECK(account.salt.size() == 16);
  CHECK(account.status == AccountStatus::Active);
  CHECK(account.credential == credential_digest(account.salt, password));

  // Same node seed and history: same password. Recorded once from this build.
  CHECK(make_node("FBI")->register_user("analyst7") == password);
  CHECK(password == kGoldenPassword);
  CHECK(fbi->register_user("analyst8") != password);
}

TEST_CASE("restored accounts") {
  auto fbi = make_node("FBI");
  const std::string password = fbi->register_user("a");
  auto other = make_node("FBI");
  other->restore_account(fbi->accounts().at("a"));
  CHECK(other->verify_password("a", password));
  CHECK_THROWS_AS(other->restore_account(fbi->accounts().at("a")), DuplicateUserError);

  UserAccount pending{"p", Bytes(16), credential_digest(Bytes(16), "pw"), AccountStatus::Pending};
  other->restore_account(pending);
  CHECK_FALSE(other->verify_password("p", "pw"));
  CHECK_THROWS_AS(other->restore_account(UserAccount{"q", Bytes(3), {}, AccountStatus::Active}), ConfigError);
}

TEST_CASE("general-user queries") {
  auto fbi = make_node("FBI");
  const std::string password = fbi->register_user("u");
  const auto items = fbi->user_query("u", password, "98LetT1", QueryKind::InfoItems);
  CHECK(items.size() == 2);
  CHECK(testing::is_subset(items, testing::range_items(11, 20)));
  CHECK(fbi->user_query("u", password, "98LetT1", QueryKind::Activities).size() == 1);
  CHECK(fbi->user_query("u", password, "nothing", QueryKind::InfoItems).empty());
  CHECK_THROWS_AS(fbi->user_query("u", "wrong", "98LetT1", QueryKind::InfoItems), AuthError);
  CHECK_THROWS_AS(fbi->user_query("v", password, "98LetT1", QueryKind::InfoItems), AuthError);
}

TEST_CASE("user queries never modify the store") {
  auto fbi = make_node("FBI");
  const std::string password = fbi->register_user("u");
  const Digest before = fbi->store().fingerprint();
  std::mt19937_64 rng(8);
  const std::vector<std::string> codes = {"98LetT1", "06TalT4", "x", "", "98LetT1\n"};
  for (int i = 0; i < 500; ++i) {
    std::string user = rng() % 2 ? "u" : std::string(1 + rng() % 5, static_cast<char>('a' + rng() % 26));
    std::string pw = rng() % 2 ? password : to_hex(testing::random_bytes(rng, 6));
    try {
      fbi->user_query(user, pw, codes[rng() % codes.size()], rng() % 2 ? QueryKind::Activities : QueryKind::InfoItems);
    } catch (const AuthError&) {
    }
  }
  CHECK(fbi->store().fingerprint() == before);
  CHECK(fbi->store() == world().store("FBI"));
}

TEST_CASE("duplicate store matches what the handshake discloses") {
  auto cia = make_node("CIA");
  auto fbi = make_node("FBI");
  for (const auto& [code, master] : fbi->store().records()) {
    const auto out = cia->send_request(AgencyId("FBI"), QueryPayload{code, QueryKind::InfoItems});
    const auto resp = fbi->handle_incoming(out.bytes);
    REQUIRE(resp.has_value());
    const auto shared = cia->accept_response(out.request_id, *resp);
    const InfoRecord* snap = fbi->duplicates().find("CIA", code);
    REQUIRE(snap != nullptr);
    CHECK(snap->items == shared.items);
  }
  CHECK(fbi->duplicates().find("ISI", "98LetT1") != nullptr);
  CHECK(fbi->duplicates().find("RAW", "98LetT1")->items.size() == 5);
  CHECK(fbi->duplicates().find("ISI", "98LetT8")->items.size() == 8);
  CHECK(fbi->duplicates().find("CIA", "none") == nullptr);
}

TEST_CASE("failed requests are audited") {
  auto cia = make_node("CIA");
  auto fbi = make_node("FBI");

  auto out = cia->send_request(AgencyId("FBI"), QueryPayload{"98LetT1"});
  Bytes tampered = out.bytes;
  tampered[10] ^= 0x04;
  CHECK_FALSE(fbi->handle_incoming(tampered).has_value());
  REQUIRE(fbi->audit_log().size() == 1);
  const auto& e = fbi->audit_log()[0];
  CHECK(e.error == ErrorClass::Decode);
  CHECK(e.peer == "-");
  CHECK(e.request_digest == md5_digest(tampered));
  CHECK(e.line() == "1 | - | DecodeError | " + md5_digest(tampered).hex());

  // An envelope from an agency missing from the registry.
  const auto& w = world();
  const KeyPair mi6 = generate_keypair(w.scenario.key_bits, 4242);
  const auto forged = build_source_request(AgencyId("MI6"), AgencyId("FBI"), QueryPayload{"98LetT1"}, mi6,
                                           *w.registry, 5, 1);
  CHECK_FALSE(fbi->handle_incoming(forged.request.ciphertext).has_value());
  REQUIRE(fbi->audit_log().size() == 2);
  CHECK(fbi->audit_log()[1].peer == "MI6");
  CHECK(fbi->audit_log()[1].error == ErrorClass::UnknownAgency);
  CHECK(fbi->audit_log()[1].line().rfind("2 | MI6 | UnknownAgencyError | ", 0) == 0);

  CHECK(fbi->handle_incoming(out.bytes).has_value());
  CHECK(fbi->audit_log().size() == 2);
}

TEST_CASE("responses are matched to outstanding requests") {
  auto cia = make_node("CIA");
  auto fbi = make_node("FBI");
  const auto a = cia->send_request(AgencyId("FBI"), QueryPayload{"98LetT1"});
  const auto b = cia->send_request(AgencyId("FBI"), QueryPayload{"98LetT1"});
  CHECK(a.request_id != b.request_id);
  CHECK(cia->pending_count() == 2);
  const auto ra = fbi->handle_incoming(a.bytes);
  const auto rb = fbi->handle_incoming(b.bytes);

  CHECK_THROWS_AS(cia->accept_response(999, *ra), RequestCorrelationError);
  CHECK_THROWS_AS(cia->accept_response(b.request_id, *ra), AgencyVerificationError);
  CHECK(cia->pending(b.request_id) != nullptr);
  CHECK(cia->accept_response(a.request_id, *ra).items.size() == 9);
  CHECK(cia->pending(a.request_id) == nullptr);
  CHECK_THROWS_AS(cia->accept_response(a.request_id, *ra), RequestCorrelationError);
  CHECK(cia->accept_response(b.request_id, *rb).items.size() == 9);
  CHECK(cia->pending_count() == 0);
}

TEST_CASE("sending needs a trust record and a registered target") {
  auto fbi = make_node("FBI");
  CHECK_THROWS_AS(fbi->send_request(AgencyId("ISI"), QueryPayload{"x"}), NoTrustRecordError);
  auto cia = make_node("CIA");
  CHECK_THROWS_AS(cia->send_request_sealed_for(AgencyId("FBI"), QueryPayload{"x"}, AgencyId("MI6")),
                  UnknownAgencyError);
}
