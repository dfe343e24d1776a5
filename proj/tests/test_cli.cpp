#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "ifslab/cli.hpp"
#include "ifslab/io.hpp"
#include "ifslab/parallel.hpp"

using namespace ifslab;

namespace {

const std::string data = IFSLAB_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_experiment(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "ifslab_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("dim prints fifteen significant digits") {
    auto r = run({"dim", data + "/c13.json"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.630929753571457\n");
    CHECK(run({"dim", data + "/c14.json"}).out == "0.5\n");
}

TEST_CASE("embed-check verdicts and expectations") {
    auto ok = run({"embed-check", data + "/c19.json", data + "/c13.json", "--g", "1,0", "--res", "2^-16"});
    CHECK(ok.code == 0);
    auto j = parse_json(ok.out, "stdout");
    CHECK(j["status"] == "consistent");
    CHECK(j["config"]["parameters"]["res"] == "2^-16");

    auto bad = run({"embed-check", data + "/c14.json", data + "/c13.json", "--res", "2^-10", "--expect", "consistent"});
    CHECK(bad.code == 1);
    CHECK(parse_json(bad.out, "stdout")["witness"]["word"] == "(1,1,1,2,2)");
    CHECK(run({"embed-check", data + "/c14.json", data + "/c13.json", "--res", "2^-10", "--expect", "rejected"}).code == 0);
    CHECK(run({"embed-check", data + "/c14.json", data + "/c13.json", "--res", "2^-10"}).code == 0);
}

TEST_CASE("input errors exit with status 2") {
    auto path = scratch("broken.json");
    {
        std::ofstream f(path);
        f << "{\"maps\": [\n  {\"r\": \"1/3\", \"t\": 0},\n  {\"r\": \"1/3\" \"t\": \"2/3\"}\n]}\n";
    }
    auto r = run({"dim", path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(":3:") != std::string::npos);

    CHECK(run({"dim", data + "/missing.json"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"embed-check", data + "/c19.json", data + "/c13.json", "--res", "0"}).code == 2);
    CHECK(run({"embed-check", data + "/c19.json", data + "/c13.json", "--g", "1"}).code == 2);
    CHECK(run({"pisot", "--poly", "2,1"}).code == 2);

    auto hyp = run({"renorm", data + "/c19.json", data + "/mixed_half_third.json", "--nmax", "10"});
    CHECK(hyp.code == 2);
    CHECK(hyp.err.find("homogeneous") != std::string::npos);
}

TEST_CASE("help exits successfully") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("csv outputs carry the configuration") {
    auto r = run({"entropy", data + "/c13.json", "--level", "14", "--nmin", "4", "--nmax", "12"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# ifslab 0.1.0\n# command: entropy\n", 0) == 0);
    CHECK(r.out.find("# level: 14\n") != std::string::npos);
    CHECK(r.out.find("n,H_bits\n4,") != std::string::npos);
    CHECK(r.out.find("\nslope,") != std::string::npos);

    auto orbit = run({"orbit", "--x", "log(1/2)/log(1/3)", "--N", "1000"});
    CHECK(orbit.code == 0);
    CHECK(orbit.out.find("summary,max_gap=") != std::string::npos);
    CHECK(orbit.out.find("distinct_gaps=3") != std::string::npos);

    auto renorm = run({"renorm", data + "/c19.json", data + "/c13.json", "--g", "1,0", "--i", "1", "--nmax", "20"});
    CHECK(renorm.code == 0);
    CHECK(renorm.out.find("n,l_n,frac_n,eta_n,t_n,verified\n3,6,0,") != std::string::npos);
    CHECK(renorm.out.find(",false\n") == std::string::npos);
}

TEST_CASE("output files start with the header and ignore the thread count") {
    auto a = scratch("conv1.csv");
    auto b = scratch("conv8.csv");
    std::vector<std::string> args{"convolve", data + "/nu_scales.json", data + "/c13.json", "--level", "14", "--nmin", "4", "--nmax", "12"};
    unsigned saved = parallel::thread_count();
    parallel::set_thread_count(1);
    auto args1 = args;
    args1.insert(args1.end(), {"--output", a.string()});
    CHECK(run(args1).code == 0);
    parallel::set_thread_count(8);
    auto args8 = args;
    args8.insert(args8.end(), {"--output", b.string()});
    CHECK(run(args8).code == 0);
    parallel::set_thread_count(saved);
    std::string text = slurp(a);
    CHECK(text.rfind("# ifslab 0.1.0\n# command: convolve\n", 0) == 0);
    CHECK(text == slurp(b));

    auto d = scratch("dim.csv");
    CHECK(run({"dim", data + "/c13.json", "--output", d.string()}).code == 0);
    CHECK(slurp(d).rfind("# ifslab 0.1.0\n", 0) == 0);
}

TEST_CASE("verdict commands") {
    auto c = parse_json(run({"commensurable", "--alpha", "1/9", "--beta", "1/3"}).out, "stdout");
    CHECK(c["verdict"] == "rational");
    CHECK(c["p"] == 2);
    CHECK(run({"commensurable", "--alpha", "1/2", "--beta", "1/3", "--expect", "rational"}).code == 1);

    auto e = parse_json(run({"exponents", data + "/c16.json", data + "/mixed_half_third.json"}).out, "stdout");
    CHECK(e["rows"][0]["t"] == Json::array({"1", "1"}));

    auto p = parse_json(run({"pisot", "--poly", "1,-2,-1"}).out, "stdout");
    CHECK(p["is_pisot"] == true);
    CHECK(run({"pisot", "--poly", "1,0,-3", "--expect", "true"}).code == 1);

    auto s = parse_json(run({"separation", data + "/c13.json", "--depth", "3"}).out, "stdout");
    CHECK(s["kind"] == "SSC");
    CHECK(run({"separation", data + "/overlap.json", "--expect", "none"}).code == 0);
}
