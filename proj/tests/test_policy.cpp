#include <doctest.h>

#include "hipot/policy.hpp"

using namespace hipot;

TEST_CASE("accounts file parsing") {
  CredentialPolicy p = CredentialPolicy::parse(
      "# accounts\n"
      "root:Str0ng!x:strong\n"
      "ua2:alice:weak:2004-02-01T00:00:00.000Z\n");
  CHECK(p.has_account("root"));
  CHECK(p.has_account("ua2"));
  CHECK_FALSE(p.find("root")->weak);
  CHECK(p.find("ua2")->weak);
  CHECK(p.find("ua2")->created_ts == *parse_rfc3339_ms("2004-02-01T00:00:00.000Z"));
  CHECK_THROWS(CredentialPolicy::parse("justonefield\n"));
  CHECK_THROWS(CredentialPolicy::parse("a:b:medium\n"));
}

TEST_CASE("authentication checks the password valid at t") {
  CredentialPolicy p = CredentialPolicy::parse("ua2:weakpw:weak\n");
  CHECK(p.check("ua2", "weakpw", 1000));
  CHECK_FALSE(p.check("ua2", "other", 1000));
  CHECK_FALSE(p.check("nobody", "weakpw", 1000));

  REQUIRE(p.change_password("ua2", "weakpw", "Str0ng", 5000));
  CHECK_FALSE(p.check("ua2", "weakpw", 6000));
  CHECK(p.check("ua2", "Str0ng", 6000));
  // Historical check: before the change the old password was valid.
  CHECK(p.check("ua2", "weakpw", 4000));

  // Wrong old password: no change.
  CHECK_FALSE(p.change_password("ua2", "weakpw", "x", 7000));
  CHECK(p.check("ua2", "Str0ng", 8000));

  // Change back: original password valid again.
  REQUIRE(p.change_password("ua2", "Str0ng", "weakpw", 9000));
  CHECK(p.check("ua2", "weakpw", 10000));
}

TEST_CASE("egress policy: default deny, in-band allow, windows") {
  EgressPolicy e;
  CHECK(e.check("http", 1000) == EgressVerdict::Deny);
  CHECK(e.check("smtp", 1000) == EgressVerdict::Deny);
  CHECK(e.check(kInBandProto, 1000) == EgressVerdict::Allow);

  e = EgressPolicy::parse(
      "# windows\n"
      "http 2026-01-01T00:00:00.000Z 2026-01-01T01:00:00.000Z\n");
  const TimeMs t0 = *parse_rfc3339_ms("2026-01-01T00:30:00.000Z");
  const TimeMs t1 = *parse_rfc3339_ms("2026-01-01T02:00:00.000Z");
  CHECK(e.check("http", t0) == EgressVerdict::Allow);
  CHECK(e.check("http", t1) == EgressVerdict::Deny);
  CHECK(e.check("smtp", t0) == EgressVerdict::Deny);
}

TEST_CASE("rfc3339 helpers") {
  const char* s = "2004-07-12T13:45:59.123Z";
  auto t = parse_rfc3339_ms(s);
  REQUIRE(t);
  CHECK(format_rfc3339_ms(*t) == s);
  CHECK_FALSE(parse_rfc3339_ms("not a time"));
  CHECK(format_rfc3339_ms(0) == "1970-01-01T00:00:00.000Z");
}
