#include "fixture.hpp"

#include <gtest/gtest.h>

using namespace semladder;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    for (const auto& l : text::split(s, '\n'))
        if (!l.empty()) out.push_back(l);
    return out;
}

class CliScript : public ::testing::Test {
protected:
    void SetUp() override {
        cli.home = fixture::scratch(::testing::UnitTest::GetInstance()->current_test_info()->name());
        script = fixture::run_script(cli);
        ASSERT_TRUE(script.ok) << "fixture script failed";
    }
    void TearDown() override { std::filesystem::remove_all(cli.home); }

    fixture::Cli cli;
    fixture::Script script;
};

}  // namespace

TEST_F(CliScript, LabelOfTheStatement) {
    auto r = cli("label " + script.l3);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "specimen X has a mass of 4.96 gram\n");
    // the modelled unit renders through its crosswalk back to the same text
    EXPECT_EQ(cli("label " + script.l4).out, "specimen X has a mass of 4.96 gram\n");
}

TEST_F(CliScript, ExitCodes) {
    EXPECT_EQ(cli("label https://example.org/unit/nothing").status, 3);
    EXPECT_EQ(cli("structure " + script.l1).status, 2);
    EXPECT_EQ(cli("lift --rules no-such-rules " + script.l4).status, 3);
    EXPECT_EQ(cli("frobnicate").status, 1);
    EXPECT_EQ(cli("trace " + script.l5 + " --to sideways").status, 1);
    EXPECT_EQ(cli("enrich").status, 1);
    EXPECT_EQ(fixture::run(fixture::quote(fixture::cli()) + " --home /nonexistent/semladder stats").status, 3);
}

TEST_F(CliScript, EveryPorcelainLineIsARecord) {
    std::vector<std::string> outputs;
    for (const auto& s : script.steps) outputs.push_back(s.out);
    const std::vector<std::string> commands{
        "query --level L3", "query --text grams", "query --triple '?s ex:hasMass ?v'", "trace " + script.l5 + " --to source",
        "trace " + script.l1 + " --to formal", "graph " + script.l3, "label " + script.l4, "embed --all",
        "query --similar 'specimen mass' -k 3", "export --format quads", "export --format tables --schema measurement",
        "export --format records", "stats"};
    for (const auto& args : commands) {
        auto r = cli(args + " --porcelain");
        EXPECT_EQ(r.status, 0) << args;
        EXPECT_FALSE(r.out.empty()) << args;
        outputs.push_back(r.out);
    }
    for (const auto& out : outputs) {
        std::size_t n = 0;
        for (const auto& line : lines_of(out)) EXPECT_NO_THROW(records::parse_line(line, ++n)) << line;
    }
}

TEST_F(CliScript, TraceReachesTheSourceText) {
    auto r = cli("trace " + script.l5 + " --to source --porcelain");
    auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 4u);  // the start unit is not listed
    auto root = records::parse_line(lines.back(), 4);
    EXPECT_EQ(root.at("gupri"), script.l1);
    EXPECT_EQ(root.at("level"), "L1");
    EXPECT_EQ(root.at("text"), fixture::sentence);
    EXPECT_EQ(root.at("start"), 0);
    EXPECT_EQ(root.at("end"), 36);
    EXPECT_EQ(root.at("source"), "doc:specimen");
}

TEST_F(CliScript, QueryFindsTheLiftedFact) {
    auto r = cli("query --triple 'ex:specimenX ex:hasMass ?v'");
    EXPECT_EQ(r.out, script.l5 + "\tL5\n");
}

TEST(CliDeterminism, TwoRunsAreByteIdentical) {
    fixture::Cli a{fixture::scratch("det-a")}, b{fixture::scratch("det-b")};
    auto sa = fixture::run_script(a);
    auto sb = fixture::run_script(b);
    ASSERT_TRUE(sa.ok && sb.ok);
    EXPECT_EQ(sa.l5, sb.l5);
    EXPECT_EQ(read_file(a.home / "journal.jsonl"), read_file(b.home / "journal.jsonl"));
    for (const auto& fmt : {"quads", "records"})
        EXPECT_EQ(a(std::string("export --format ") + fmt).out, b(std::string("export --format ") + fmt).out) << fmt;
    std::filesystem::remove_all(a.home);
    std::filesystem::remove_all(b.home);
}

TEST(CliDeterminism, TablesWrittenToFiles) {
    fixture::Cli c{fixture::scratch("tables")};
    auto s = fixture::run_script(c);
    ASSERT_TRUE(s.ok);
    auto dir = c.home / "out";
    ASSERT_EQ(c("export --format tables --schema measurement --out " + fixture::quote(dir.string())).status, 0);
    EXPECT_EQ(read_file(dir / "measurement.content.csv"),
              "unit,MATERIAL ENTITY,QUALITY,VALUE,UNIT\r\n" + s.l3 + ",ex:specimenX,ex:mass,4.96,ex:gram\r\n");
    EXPECT_EQ(read_file(dir / "measurement.meta.csv"),
              "unit,class,created_at,creator,logical_framework\r\n" + s.l3 +
                  ",sl:RosettaStatementUnit,2024-01-01T00:00:00Z,tester,rdf-reification\r\n");
    std::filesystem::remove_all(c.home);
}
