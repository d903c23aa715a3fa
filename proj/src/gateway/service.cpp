#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <cctype>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <thread>

#include "hg/gateway.hpp"

namespace hg::gateway {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;
using Frame = std::shared_ptr<const std::string>;

class WsSession;

struct SessionEntry {
  std::string id;
  std::shared_mutex mu;
  ManagedSession managed;
  std::vector<Frame> events;  // one frame per record, index = seq
  std::vector<std::weak_ptr<WsSession>> subscribers;

  SessionEntry(std::string i, ManagedSession m) : id(std::move(i)), managed(std::move(m)) {}
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, std::shared_ptr<SessionEntry> entry, std::size_t since)
      : ws_(std::move(socket)), entry_(std::move(entry)), since_(since) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  // Called with the entry lock held, so frames are posted in sequence order.
  void send(Frame f) {
    net::post(ws_.get_executor(), [self = shared_from_this(), f = std::move(f)] {
      self->queue_.push_back(f);
      if (self->queue_.size() == 1) self->do_write();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    {
      std::unique_lock lk(entry_->mu);
      for (std::size_t k = since_; k < entry_->events.size(); ++k) send(entry_->events[k]);
      entry_->subscribers.push_back(weak_from_this());
    }
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->buffer_.consume(self->buffer_.size());
      self->do_read();
    });
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->do_write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<Frame> queue_;
  std::shared_ptr<SessionEntry> entry_;
  std::size_t since_;
};

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

struct Target {
  std::vector<std::string> segments;
  std::map<std::string, std::string> query;
};

Target split_target(std::string_view target) {
  Target t;
  auto q = target.find('?');
  std::string_view path = target.substr(0, q);
  if (q != std::string_view::npos) {
    std::string_view rest = target.substr(q + 1);
    while (!rest.empty()) {
      auto amp = rest.find('&');
      std::string_view kv = rest.substr(0, amp);
      auto eq = kv.find('=');
      t.query[percent_decode(kv.substr(0, eq))] = eq == std::string_view::npos ? "" : percent_decode(kv.substr(eq + 1));
      if (amp == std::string_view::npos) break;
      rest = rest.substr(amp + 1);
    }
  }
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) t.segments.push_back(percent_decode(path.substr(pos, next - pos)));
    pos = next + 1;
  }
  return t;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

Json simple_error(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

// ---------------------------------------------------------------------------

struct Service::Impl {
  ServiceConfig cfg;
  // destroyed by stop() so pending handlers release their sockets
  std::optional<net::io_context> ioc{std::in_place};
  std::optional<tcp::acceptor> acceptor{std::in_place, *ioc};
  std::vector<std::thread> threads;
  std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
  std::size_t next_id = 1;
  std::mutex state_mu;
  std::condition_variable state_cv;
  bool running = false;

  explicit Impl(ServiceConfig c) : cfg(std::move(c)) {}

  std::shared_ptr<SessionEntry> find(const std::string& id) {
    std::lock_guard lk(sessions_mu);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  std::string add(ManagedSession m, std::string id = {}) {
    std::lock_guard lk(sessions_mu);
    if (id.empty()) {
      do id = "s" + std::to_string(next_id++);
      while (sessions.contains(id));
    }
    auto entry = std::make_shared<SessionEntry>(id, std::move(m));
    for (const auto& r : entry->managed.session.log()) entry->events.push_back(event_frame(entry->managed.session, r));
    sessions.emplace(id, std::move(entry));
    return id;
  }

  static Frame event_frame(const Session& s, const ActionRecord& r) {
    Json j = {{"seq", r.seq}, {"record", record_json(r)}, {"delta", delta_json(s, r)}};
    return std::make_shared<const std::string>(j.dump());
  }

  // entry->mu held exclusively
  static void publish(SessionEntry& e, Frame f) {
    e.events.push_back(f);
    std::erase_if(e.subscribers, [&](const std::weak_ptr<WsSession>& w) {
      auto ws = w.lock();
      if (!ws) return true;
      ws->send(f);
      return false;
    });
  }

  void load_dir() {
    std::error_code ec;
    std::filesystem::create_directories(cfg.session_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + cfg.session_dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& de : std::filesystem::directory_iterator(cfg.session_dir))
      if (de.path().extension() == ".hgsession") files.push_back(de.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      try {
        add(load_session(p), p.stem().string());
      } catch (const Error& e) {
        std::cerr << "skipping " << p.string() << ": " << e.what() << '\n';
      }
    }
  }

  Response reply(const Request& req, http::status status, const Json& body) {
    Response res{status, req.version()};
    res.set(http::field::content_type, "application/json");
    res.set(http::field::server, "hg");
    res.keep_alive(req.keep_alive());
    res.body() = body.dump();
    res.prepare_payload();
    return res;
  }

  Response reply(const Request& req, int status, const Json& body) {
    return reply(req, static_cast<http::status>(status), body);
  }

  Response handle(const Request& req) {
    try {
      return route(req);
    } catch (const Error& e) {
      return reply(req, http_status(e.code()), error_json(e));
    } catch (const std::exception& e) {
      return reply(req, 500, simple_error("Internal", e.what()));
    }
  }

  Response route(const Request& req) {
    Target t = split_target(std::string_view(req.target().data(), req.target().size()));
    const auto& seg = t.segments;
    const auto method = req.method();
    auto not_found = [&](const std::string& what) { return reply(req, 404, simple_error("NotFound", what)); };
    auto bad_method = [&] { return reply(req, 405, simple_error("MethodNotAllowed", std::string(req.method_string()))); };

    if (seg.size() == 1 && seg[0] == "health") {
      if (method != http::verb::get) return bad_method();
      std::lock_guard lk(sessions_mu);
      return reply(req, 200, Json{{"status", "ok"}, {"sessions", sessions.size()}});
    }
    if (seg.empty() || seg[0] != "sessions") return not_found("no route " + std::string(req.target()));

    if (seg.size() == 1) {
      if (method == http::verb::get) {
        std::lock_guard lk(sessions_mu);
        Json ids = Json::array();
        for (const auto& [id, e] : sessions) ids.push_back(id);
        return reply(req, 200, Json{{"sessions", ids}});
      }
      if (method != http::verb::post) return bad_method();
      Json body = Json::parse(req.body(), nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("spec") || !body.contains("goal") ||
          !body["spec"].is_string() || !body["goal"].is_string())
        return reply(req, 400, simple_error("BadRequest", "expected {\"spec\": string, \"goal\": string}"));
      SessionConfig sc = cfg.session;
      if (body.contains("config") && body["config"].is_object()) {
        sc.default_scope = body["config"].value("default_scope", sc.default_scope);
        sc.scope_ceiling = body["config"].value("scope_ceiling", sc.scope_ceiling);
      }
      ManagedSession m = open_session(body["spec"].get<std::string>(), body["goal"].get<std::string>(), sc, cfg.registry);
      Json tree = tree_json(m.session);
      std::string id = add(std::move(m));
      return reply(req, 201, Json{{"session_id", id}, {"root", 0}, {"tree", tree}});
    }

    auto entry = find(seg[1]);
    if (!entry) return not_found("no session " + seg[1]);

    if (seg.size() == 3 && seg[2] == "tree") {
      if (method != http::verb::get) return bad_method();
      std::shared_lock lk(entry->mu);
      Json j = tree_json(entry->managed.session);
      j["session_id"] = entry->id;
      return reply(req, 200, j);
    }
    if (seg.size() == 3 && seg[2] == "log") {
      if (method != http::verb::get) return bad_method();
      std::shared_lock lk(entry->mu);
      Json log = Json::array();
      for (const auto& r : entry->managed.session.log()) log.push_back(record_json(r));
      return reply(req, 200, Json{{"session_id", entry->id}, {"log", log}});
    }
    if (seg.size() == 3 && seg[2] == "save") {
      if (method != http::verb::post) return bad_method();
      std::shared_lock lk(entry->mu);
      auto path = cfg.session_dir / (entry->id + ".hgsession");
      save_session(entry->managed, path);
      return reply(req, 200, Json{{"path", path.string()}, {"digest", tree_digest(entry->managed.session)}});
    }
    if (seg.size() >= 4 && seg[2] == "nodes") {
      auto nid = parse_index(seg[3]);
      if (!nid) return not_found("no node " + seg[3]);
      if (seg.size() == 5 && seg[4] == "actions") {
        if (method != http::verb::get) return bad_method();
        std::shared_lock lk(entry->mu);
        Json offers = Json::array();
        for (const auto& o : entry->managed.session.applicable_actions(*nid)) offers.push_back(offer_json(o));
        return reply(req, 200, Json{{"node", *nid}, {"actions", offers}});
      }
      if (seg.size() == 6 && seg[4] == "actions") {
        if (method != http::verb::post) return bad_method();
        return apply(req, *entry, *nid, seg[5]);
      }
    }
    return not_found("no route " + std::string(req.target()));
  }

  Response apply(const Request& req, SessionEntry& entry, NodeId nid, const std::string& action) {
    Params params;
    if (!req.body().empty()) {
      Json body = Json::parse(req.body(), nullptr, false);
      if (body.is_discarded() || !body.is_object())
        return reply(req, 400, simple_error("BadRequest", "expected a JSON object"));
      if (body.contains("params")) {
        if (!body["params"].is_object()) return reply(req, 422, simple_error("BadParameter", "params must be an object"));
        for (const auto& [k, v] : body["params"].items()) params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    std::unique_lock lk(entry.mu);
    Session& s = entry.managed.session;
    try {
      const ActionRecord& rec = s.apply_action(nid, action, params);
      Frame f = event_frame(s, rec);
      publish(entry, f);
      return reply(req, 200, Json::parse(*f));
    } catch (const ValidationFailure& e) {
      const ActionRecord& rec = s.log().back();
      Frame f = event_frame(s, rec);
      publish(entry, f);
      Json body = error_json(e);
      body["seq"] = rec.seq;
      body["record"] = record_json(rec);
      body["delta"] = delta_json(s, rec);
      return reply(req, 409, body);
    }
  }

  void upgrade(tcp::socket socket, Request req) {
    Target t = split_target(std::string_view(req.target().data(), req.target().size()));
    std::shared_ptr<SessionEntry> entry;
    if (t.segments.size() == 3 && t.segments[0] == "sessions" && t.segments[2] == "events") entry = find(t.segments[1]);
    if (!entry) {
      // refuse the handshake with a plain 404
      beast::tcp_stream stream(std::move(socket));
      Response res = reply(req, 404, simple_error("NotFound", "no event stream at " + std::string(req.target())));
      res.keep_alive(false);
      beast::error_code ec;
      http::write(stream, res, ec);
      stream.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    std::size_t since = 0;
    if (auto it = t.query.find("since"); it != t.query.end())
      if (auto v = parse_index(it->second)) since = *v;
    std::make_shared<WsSession>(std::move(socket), std::move(entry), since)->run(std::move(req));
  }

  void do_accept();
};

namespace {

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Service::Impl* svc) : stream_(std::move(socket)), svc_(svc) {}

  void run() { net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this())); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      svc_->upgrade(stream_.release_socket(), std::move(req_));
      return;
    }
    res_ = std::make_shared<Response>(svc_->handle(req_));
    http::async_write(stream_, *res_, beast::bind_front_handler(&HttpSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (!res_->keep_alive()) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    res_.reset();
    do_read();
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  Service::Impl* svc_;
  Request req_;
  std::shared_ptr<Response> res_;
};

}  // namespace

void Service::Impl::do_accept() {
  acceptor->async_accept(net::make_strand(*ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec == net::error::operation_aborted) return;
    } else {
      std::make_shared<HttpSession>(std::move(socket), this)->run();
    }
    do_accept();
  });
}

Service::Service(ServiceConfig config) : impl_(std::make_shared<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

unsigned short Service::start() {
  Impl& m = *impl_;
  m.load_dir();
  tcp::endpoint ep{net::ip::make_address(m.cfg.address), m.cfg.port};
  beast::error_code ec;
  m.acceptor->open(ep.protocol(), ec);
  if (!ec) m.acceptor->set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) m.acceptor->bind(ep, ec);
  if (!ec) m.acceptor->listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot listen on " + m.cfg.address + ":" + std::to_string(m.cfg.port) + ": " +
                                              ec.message());
  m.do_accept();
  {
    std::lock_guard lk(m.state_mu);
    m.running = true;
  }
  for (int i = 0; i < std::max(1, m.cfg.threads); ++i) m.threads.emplace_back([&m] { m.ioc->run(); });
  return m.acceptor->local_endpoint().port();
}

void Service::stop() {
  Impl& m = *impl_;
  {
    std::lock_guard lk(m.state_mu);
    if (!m.running) return;
    m.running = false;
  }
  m.ioc->stop();
  for (auto& t : m.threads)
    if (t.joinable()) t.join();
  m.threads.clear();
  m.acceptor.reset();
  m.ioc.reset();
  m.state_cv.notify_all();
}

void Service::wait() {
  Impl& m = *impl_;
  std::unique_lock lk(m.state_mu);
  m.state_cv.wait(lk, [&] { return !m.running; });
}

}  // namespace hg::gateway
