#include <sys/stat.h>
#include <unistd.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csazkp/codec.hpp"
#include "csazkp/construction.hpp"
#include "csazkp/errors.hpp"
#include "csazkp/protocol.hpp"
#include "csazkp/session.hpp"
#include "csazkp/signature.hpp"

namespace fs = std::filesystem;
using namespace csazkp;

namespace {

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string read_raw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text, bool secret = false) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text << '\n';
  out.close();
  if (!out) throw UsageError("write failed for " + path.string());
  if (secret) fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
}

fs::path public_path(const fs::path& p) { return fs::is_directory(p) ? p / "public.cskey" : p; }

PublicKey load_public(const fs::path& p) { return decode_public_key(read_file(public_path(p))); }

KeyPair load_keypair(const fs::path& dir) {
  PublicKey pk = load_public(dir);
  Isomorphism phi = decode_secret_key(read_file(dir / "secret.cskey"), pk);
  if (!verify_isomorphism(pk.a0, pk.a1, phi)) throw UsageError("secret key does not match the public key");
  return KeyPair{std::move(pk), std::move(phi)};
}

SessionProtocol parse_protocol(const std::string& name) {
  if (name == "p1" || name == "identification") return SessionProtocol::identification;
  if (name == "p2" || name == "protocol2") return SessionProtocol::protocol2;
  throw UsageError("unknown protocol " + name);
}

void describe(std::ostream& os, const std::string& label, const Algebra& a) {
  os << label << "dimension: " << a.dim() << '\n';
  os << label << "associative: yes\n";
  os << label << "identity: " << encode(a.identity()) << '\n';
  os << label << "center dimension: " << center_dimension(a) << '\n';
  for (std::size_t i = 0; i < a.dim(); ++i)
    os << label << "minpoly(b" << i << "): " << minimal_polynomial(a, a.basis_element(i)).to_string() << '\n';
}

AlgElement parse_element_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return decode_element(arg);
  if (fs::exists(arg)) return decode_element(read_file(arg));
  AlgElement x;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) x.coords.push_back(parse_rational(item));
  return x;
}

int cmd_inspect(const std::string& file, const std::string& element) {
  const std::string text = read_file(file);
  std::vector<std::pair<std::string, Algebra>> algebras;
  try {
    if (text.rfind("{\"format\":\"csazkp-public\"", 0) == 0) {
      PublicKey pk = decode_public_key(text);
      std::cout << "public key: variant " << to_string(pk.variant) << ", k " << pk.k << '\n';
      algebras.emplace_back("A0 ", pk.a0);
      algebras.emplace_back("A1 ", pk.a1);
    } else {
      algebras.emplace_back("", decode_algebra(text));
    }
  } catch (const DecodeError& e) {
    if (e.kind() == DecodeError::Kind::validation) {
      std::cout << "associative: no\n" << e.what() << '\n';
      return kReject;
    }
    throw;
  }
  for (const auto& [label, a] : algebras) describe(std::cout, label, a);
  if (!element.empty()) {
    const AlgElement x = parse_element_arg(element);
    const Algebra& a = algebras.back().second;
    if (x.size() != a.dim()) throw UsageError("element has the wrong number of coordinates");
    std::cout << "minpoly(element): " << minimal_polynomial(a, x).to_string() << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGPIPE, SIG_IGN);
  CLI::App app{"Zero-knowledge identification and signatures from algebra isomorphism"};
  app.require_subcommand(1);

  KeygenParams kp;
  std::string variant = "matrix";
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool no_element = false;
  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
  keygen_cmd->add_option("--variant", variant, "matrix, division or order")->check(CLI::IsMember({"matrix", "division", "order"}));
  keygen_cmd->add_option("--k", kp.k, "security parameter (algebra is k^2-dimensional)");
  keygen_cmd->add_option("--height", kp.height, "coordinate height for random sampling");
  keygen_cmd->add_option("--order-bound", kp.order_bound, "entry bound for order-variant secrets");
  keygen_cmd->add_option("--seed", seed, "deterministic seed");
  keygen_cmd->add_flag("--no-element", no_element, "omit the public element");
  keygen_cmd->add_option("--out", out_dir, "output directory")->required();

  std::string key_dir;
  std::string public_dir;
  unsigned rounds = 10;
  std::string connect;
  std::string listen;
  bool use_stdio = false;
  unsigned sessions = 1;
  std::string protocol = "p1";
  double timeout = 30.0;
  auto* prove_cmd = app.add_subcommand("prove", "run the prover side of a session");
  prove_cmd->add_option("--key", key_dir, "key directory")->required();
  prove_cmd->add_option("--rounds", rounds, "identification rounds");
  prove_cmd->add_option("--protocol", protocol, "p1 (identification) or p2");
  prove_cmd->add_option("--timeout", timeout, "seconds per frame");
  auto* prove_connect = prove_cmd->add_option("--connect", connect, "verifier address host:port");
  auto* prove_stdio = prove_cmd->add_flag("--stdio", use_stdio, "talk over stdin/stdout");
  prove_connect->excludes(prove_stdio);

  auto* verify_cmd = app.add_subcommand("verify", "run the verifier side of a session");
  verify_cmd->add_option("--public", public_dir, "public key directory or file")->required();
  verify_cmd->add_option("--rounds", rounds, "identification rounds");
  verify_cmd->add_option("--protocol", protocol, "p1 (identification) or p2");
  verify_cmd->add_option("--timeout", timeout, "seconds per frame");
  verify_cmd->add_option("--sessions", sessions, "connections to serve with --listen");
  auto* verify_listen = verify_cmd->add_option("--listen", listen, "address host:port");
  auto* verify_stdio = verify_cmd->add_flag("--stdio", use_stdio, "talk over stdin/stdout");
  verify_listen->excludes(verify_stdio);

  std::string message_file;
  std::string sig_file;
  auto* sign_cmd = app.add_subcommand("sign", "sign a message");
  sign_cmd->add_option("--key", key_dir, "key directory")->required();
  sign_cmd->add_option("--message", message_file, "message file")->required();
  sign_cmd->add_option("--out", sig_file, "signature file")->required();

  auto* verify_sig_cmd = app.add_subcommand("verify-sig", "verify a signature");
  verify_sig_cmd->add_option("--public", public_dir, "public key directory or file")->required();
  verify_sig_cmd->add_option("--message", message_file, "message file")->required();
  verify_sig_cmd->add_option("--sig", sig_file, "signature file")->required();

  std::string algebra_file;
  std::string element;
  auto* inspect_cmd = app.add_subcommand("inspect", "describe an algebra or public key");
  inspect_cmd->add_option("--algebra", algebra_file, "encoded algebra or public key")->required();
  inspect_cmd->add_option("--minpoly", element, "element: JSON, file, or comma-separated rationals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    SessionConfig config;
    config.rounds = rounds;
    config.frame_timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));

    if (*keygen_cmd) {
      kp.variant = *parse_variant(variant);
      kp.with_public_element = !no_element;
      Rng rng = seed ? Rng(*seed) : Rng::from_environment();
      KeyPair key = keygen(kp, rng);
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "public.cskey", encode(key.pub));
      write_file(fs::path(out_dir) / "secret.cskey", encode_secret(key), true);
      std::cout << "wrote " << out_dir << "/public.cskey and secret.cskey (dimension " << key.pub.a0.dim() << ")\n";
      return kOk;
    }

    if (*prove_cmd) {
      config.protocol = parse_protocol(protocol);
      if (connect.empty() && !use_stdio) throw UsageError("prove needs --connect or --stdio");
      KeyPair key = load_keypair(key_dir);
      Rng rng = Rng::from_environment();
      SessionResult r;
      if (use_stdio) {
        FdTransport t(STDIN_FILENO, STDOUT_FILENO);
        r = run_prover_session(key, t, config, rng);
      } else {
        const int fd = connect_tcp(connect);
        FdTransport t(fd, fd, true);
        r = run_prover_session(key, t, config, rng);
      }
      std::cerr << "verdict: " << (r.accepted ? "accept" : "reject") << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
      return r.accepted ? kOk : kReject;
    }

    if (*verify_cmd) {
      config.protocol = parse_protocol(protocol);
      if (listen.empty() && !use_stdio) throw UsageError("verify needs --listen or --stdio");
      PublicKey pk = load_public(public_dir);
      Rng rng = Rng::from_environment();
      if (use_stdio) {
        FdTransport t(STDIN_FILENO, STDOUT_FILENO);
        const SessionResult r = run_verifier_session(pk, t, config, rng);
        std::cerr << "verdict: " << (r.accepted ? "accept" : "reject") << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
        return r.accepted ? kOk : kReject;
      }
      const int fd = listen_tcp(listen);
      std::cerr << "listening on port " << bound_port(fd) << std::endl;
      const auto results = serve_verifier(fd, pk, config, sessions, rng);
      ::close(fd);
      bool all = true;
      for (std::size_t i = 0; i < results.size(); ++i) {
        const SessionResult& r = results[i];
        std::cerr << "session " << i << ": " << (r.accepted ? "accept" : "reject") << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
        all = all && r.accepted;
      }
      return all ? kOk : kReject;
    }

    if (*sign_cmd) {
      KeyPair key = load_keypair(key_dir);
      Rng rng = Rng::from_environment();
      const Signature sig = sign(key, read_raw(message_file), rng);
      write_file(sig_file, encode(sig));
      return kOk;
    }

    if (*verify_sig_cmd) {
      const PublicKey pk = load_public(public_dir);
      const std::string sig_text = read_file(sig_file);
      std::optional<Signature> sig;
      try {
        sig = decode_signature(sig_text);
      } catch (const DecodeError& e) {
        std::cout << "reject\n";
        std::cerr << "malformed signature: " << e.what() << '\n';
        return kReject;
      }
      const bool ok = verify_signature(pk, read_raw(message_file), *sig);
      std::cout << (ok ? "accept" : "reject") << '\n';
      return ok ? kOk : kReject;
    }

    if (*inspect_cmd) return cmd_inspect(algebra_file, element);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
