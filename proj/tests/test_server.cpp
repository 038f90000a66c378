#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "bmv/server.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace bmv::test;

namespace
{

const char * const heavy_model = "model H\nclass A\nattributes\n  x : Integer\n  y : Integer\n  z : Integer\nend\n"
                                 "constraints\ncontext A inv Never: self.x + self.y + self.z = 1000\n";
const char * const heavy_props = "[h]\nInteger_min = -100\nInteger_max = 100\nbitwidth = 12\nA_min = 4\nA_max = 4\n";

class Fixture
{
public:
  Fixture()
  {
    port_ = server_.bind("127.0.0.1", 0);
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen(); });
    for (int i = 0; i < 200 && !server_.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    dir_ = fs::path(BMV_TEST_TMP) / ("bmv-server-" + std::to_string(::getpid()) + "-" + std::to_string(port_));
    fs::create_directories(dir_);
  }

  ~Fixture()
  {
    server_.stop();
    thread_.join();
    fs::remove_all(dir_);
  }

  Fixture(const Fixture &) = delete;
  Fixture & operator=(const Fixture &) = delete;

  std::pair<int, json> send(const std::string & method, const std::string & path, const std::string & body = "",
                            const std::string & type = "application/json")
  {
    httplib::Result r;
    if (method == "GET") r = client_->Get(path);
    if (method == "POST") r = client_->Post(path, body, type);
    if (method == "PUT") r = client_->Put(path, body, type);
    REQUIRE(r);
    json doc;
    if (r->get_header_value("Content-Type").rfind("application/json", 0) == 0) doc = json::parse(r->body);
    else doc = r->body;
    return {r->status, doc};
  }

  std::string session()
  {
    auto [status, doc] = send("POST", "/sessions");
    REQUIRE(status == 201);
    return doc["id"].get<std::string>();
  }

  std::string write(const std::string & name, const std::string & text) const
  {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return (dir_ / name).string();
  }

  std::string session_with(const std::string & model, const std::string & props, const std::string & stem)
  {
    const std::string id = session();
    const std::string path = write(stem + ".use", model);
    if (!props.empty()) write(stem + ".properties", props);
    auto [status, doc] = send("POST", "/sessions/" + id + "/model", json{{"text", model}, {"path", path}}.dump());
    REQUIRE(status == 200);
    return id;
  }

  std::string corpus_session()
  {
    return session_with(slurp(source_path("models/carrental.use")), slurp(source_path("models/carrental.properties")),
                        "carrental");
  }

  std::string submit(const std::string & session, const json & body)
  {
    auto [status, doc] = send("POST", "/sessions/" + session + "/jobs", body.dump());
    REQUIRE_MESSAGE(status == 202, doc.dump());
    return doc["jobId"].get<std::string>();
  }

  json wait_for(const std::string & job, const std::string & state, int ms = 10000)
  {
    json doc;
    for (int waited = 0; waited < ms; waited += 5) {
      doc = send("GET", "/jobs/" + job).second;
      if (doc["state"] == state) return doc;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return doc;
  }

  json wait_finished(const std::string & job)
  {
    json doc;
    for (int waited = 0; waited < 20000; waited += 5) {
      doc = send("GET", "/jobs/" + job).second;
      if (doc["state"] == "done" || doc["state"] == "cancelled") return doc;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return doc;
  }

  fs::path dir() const { return dir_; }

private:
  bmv::Server server_;
  int port_ = -1;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
  fs::path dir_;
};

}  // namespace

TEST_CASE("model upload and warnings")
{
  Fixture f;
  const std::string s = f.corpus_session();
  auto [status, doc] = f.send("GET", "/sessions/" + s + "/warnings");
  CHECK(status == 200);
  REQUIRE(doc["warnings"].size() == 2);
  CHECK(doc["warnings"][0]["kind"] == "BagCollapse");
  CHECK(doc["warnings"][0]["location"]["line"].is_number());

  auto [cs, configs] = f.send("GET", "/sessions/" + s + "/configs");
  CHECK(cs == 200);
  CHECK(configs["configs"] == json::array({"scenario", "full", "groups"}));

  const std::string bare = f.session();
  auto [bs, berr] = f.send("POST", "/sessions/" + bare + "/model", "model Bad\nclass A\n", "text/plain");
  CHECK(bs == 422);
  REQUIRE_FALSE(berr["errors"].empty());
  CHECK(berr["errors"][0]["location"]["line"].is_number());

  auto [ns, nodoc] = f.send("GET", "/sessions/" + bare + "/configs");
  CHECK(ns == 409);

  auto [raw, rawdoc] = f.send("POST", "/sessions/" + bare + "/model", "model Tiny\nclass A end\n", "text/plain");
  CHECK(raw == 200);
  CHECK(rawdoc["configFile"]["loaded"] == false);
  CHECK(rawdoc["configFile"]["configs"] == json::array({"default"}));
}

TEST_CASE("validate job runs to SAT and exports the state")
{
  Fixture f;
  const std::string s = f.corpus_session();
  const std::string j = f.submit(s, {{"configName", "scenario"}});
  const json done = f.wait_for(j, "done");
  REQUIRE(done["state"] == "done");
  CHECK(done["result"]["verdict"] == "SAT");
  CHECK(done["result"]["states"] == 1);

  auto [js, state] = f.send("GET", "/jobs/" + j + "/state.json");
  CHECK(js == 200);
  CHECK(state["objects"].size() == 3);
  CHECK(state["links"].size() == 2);
  auto [ds, dot] = f.send("GET", "/jobs/" + j + "/state.dot");
  CHECK(ds == 200);
  CHECK(dot.get<std::string>().rfind("digraph state {", 0) == 0);
  CHECK(f.send("GET", "/jobs/" + j + "/state.json?index=1").first == 404);

  auto [ls, list] = f.send("GET", "/sessions/" + s + "/jobs");
  CHECK(ls == 200);
  CHECK(list["jobs"].size() == 1);
}

TEST_CASE("task jobs report outcomes")
{
  Fixture f;
  const std::string s = f.corpus_session();
  const json cons = f.wait_finished(f.submit(s, {{"kind", "consistency"}, {"configName", "full"}}));
  REQUIRE(cons["state"] == "done");
  CHECK(cons["result"]["reports"][0]["outcome"] == "holds");

  const json ind = f.wait_finished(
    f.submit(s, {{"kind", "independence"}, {"configName", "groups"}, {"invariant", "CarGroup::CycleFree"}}));
  REQUIRE(ind["state"] == "done");
  CHECK(ind["result"]["reports"][0]["verdict"] == "independent within bounds");
  CHECK(ind["result"]["reports"][0]["stateIndex"] == 0);
}

TEST_CASE("error statuses")
{
  Fixture f;
  const std::string s = f.corpus_session();
  CHECK(f.send("GET", "/sessions/nope/configs").first == 404);
  CHECK(f.send("GET", "/jobs/nope").first == 404);
  CHECK(f.send("POST", "/jobs/nope/cancel").first == 404);
  CHECK(f.send("GET", "/sessions/" + s + "/configs/nope").first == 404);
  CHECK(f.send("GET", "/sessions/" + s + "/warnings?config=nope").first == 404);
  CHECK(f.send("POST", "/sessions/" + s + "/jobs", json{{"configName", "nope"}}.dump()).first == 404);
  CHECK(f.send("POST", "/sessions/" + s + "/jobs", json{{"kind", "dance"}, {"configName", "full"}}.dump()).first ==
        400);
  CHECK(f.send("POST", "/sessions/" + s + "/jobs", "not json").first == 400);
  CHECK(f.send("POST", "/sessions/" + s + "/jobs",
               json{{"configName", "full"}, {"invariant", "Car::Nope"}}.dump())
          .first == 422);
  CHECK(f.send("POST", "/sessions/" + s + "/configs/scenario/rename", json{{"newName", "full"}}.dump()).first == 409);
  CHECK(f.send("POST", "/sessions/" + s + "/configs/nope/delete").first == 404);

  const std::string empty = f.session();
  CHECK(f.send("POST", "/sessions/" + empty + "/jobs", json::object().dump()).first == 409);
}

TEST_CASE("config edits are validated and round-trip byte for byte")
{
  Fixture f;
  const std::string s = f.corpus_session();
  auto [bad, errors] = f.send("PUT", "/sessions/" + s + "/configs/scenario", "Customer_min = abc\n", "text/plain");
  CHECK(bad == 422);
  REQUIRE(errors["errors"].size() == 1);
  CHECK(errors["errors"][0]["key"] == "Customer_min");
  CHECK(errors["errors"][0]["location"]["line"] == 1);

  auto [inv, inverr] =
    f.send("PUT", "/sessions/" + s + "/configs/scenario", "[scenario]\nCustomer_min = 3\nCustomer_max = 1\n",
           "text/plain");
  CHECK(inv == 422);
  CHECK(inverr["errors"][0]["code"] == "MinExceedsMax");

  auto [gs, original] = f.send("GET", "/sessions/" + s + "/configs/full");
  REQUIRE(gs == 200);
  const std::string text = original["text"].get<std::string>();
  auto [ps, put] = f.send("PUT", "/sessions/" + s + "/configs/full", text, "text/plain");
  CHECK(ps == 200);
  CHECK(put["text"] == text);
  CHECK(f.send("GET", "/sessions/" + s + "/configs/full").second["text"] == text);

  const std::string edited = "[trial]\nInteger_min = -2\nInteger_max = 2\nString_count = 10\nbitwidth = 8\n"
                             "default_upper = 10\nCustomer_min = 1\nCustomer_max = 2\n";
  CHECK(f.send("PUT", "/sessions/" + s + "/configs/trial", edited, "text/plain").first == 200);
  CHECK(f.send("GET", "/sessions/" + s + "/configs/trial").second["text"] == edited);

  auto [cl, clone] = f.send("POST", "/sessions/" + s + "/configs/trial/clone");
  CHECK(cl == 200);
  CHECK(clone["configs"].back() == "trial (copy)");
  CHECK(f.send("POST", "/sessions/" + s + "/configs/trial (copy)/delete").first == 200);

  auto [sv, saved] = f.send("POST", "/sessions/" + s + "/configs/save");
  CHECK(sv == 200);
  const std::string on_disk = slurp((f.dir() / "carrental.properties").string());
  CHECK(on_disk.find(edited) != std::string::npos);
  CHECK(on_disk.find(text) != std::string::npos);
}

TEST_CASE("jobs in a session run one at a time and can be cancelled")
{
  Fixture f;
  const std::string s = f.session_with(heavy_model, heavy_props, "heavy");
  const std::string first = f.submit(s, json::object());
  const std::string second = f.submit(s, json::object());
  const std::string third = f.submit(s, json::object());
  CHECK(f.wait_for(first, "running")["state"] == "running");
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  CHECK(f.send("GET", "/jobs/" + second).second["state"] == "queued");

  auto [qs, queued] = f.send("POST", "/jobs/" + third + "/cancel");
  CHECK(qs == 202);
  CHECK(queued["state"] == "cancelled");

  const std::string other = f.corpus_session();
  const json quick = f.wait_finished(f.submit(other, {{"configName", "scenario"}}));
  CHECK(quick["state"] == "done");
  CHECK(f.send("GET", "/jobs/" + first).second["state"] == "running");

  CHECK(f.send("POST", "/jobs/" + first + "/cancel").first == 202);
  CHECK(f.wait_finished(first)["state"] == "cancelled");
  CHECK(f.wait_for(second, "running")["state"] == "running");
  CHECK(f.send("POST", "/jobs/" + second + "/cancel").first == 202);
  CHECK(f.wait_finished(second)["state"] == "cancelled");
  CHECK(f.wait_finished(third)["state"] == "cancelled");
  CHECK(f.send("GET", "/jobs/" + first + "/state.json").first == 404);
}

TEST_CASE("timeouts and base states")
{
  Fixture f;
  const std::string s = f.session_with(heavy_model, heavy_props, "heavy");
  const json t = f.wait_finished(f.submit(s, {{"timeoutMs", 50}}));
  CHECK(t["state"] == "done");
  CHECK(t["result"]["verdict"] == "TIMEOUT");

  const std::string c = f.corpus_session();
  const json based = f.wait_finished(
    f.submit(c, {{"configName", "scenario"}, {"baseState", "!create boss : Employee\n!set boss.age := 40\n"}}));
  REQUIRE(based["result"]["verdict"] == "SAT");
  auto [ss, state] = f.send("GET", "/jobs/" + based["id"].get<std::string>() + "/state.json");
  CHECK(ss == 200);
  bool kept = false;
  for (const auto & o : state["objects"]) kept = kept || (o["name"] == "boss" && o["attrs"]["age"] == 40);
  CHECK(kept);

  CHECK(f.send("POST", "/sessions/" + c + "/jobs",
               json{{"configName", "scenario"}, {"baseState", "!create x : Ghost\n"}}.dump())
          .first == 422);

  const json many = f.wait_finished(f.submit(c, {{"configName", "groups"}, {"limit", 3}}));
  CHECK(many["result"]["states"] == 3);
  CHECK(f.send("GET", "/jobs/" + many["id"].get<std::string>() + "/state.dot?index=2").first == 200);
}
