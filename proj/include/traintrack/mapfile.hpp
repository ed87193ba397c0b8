#pragma once

// The line-oriented map-file format, its parser and serializer, and replay
// of move logs.  Sections are introduced by keywords (rank, generators,
// graph, marking, auto, map, filtration, ffs); words are whitespace-separated
// names with a trailing apostrophe for inverses; '#' starts a comment.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "traintrack/moves.hpp"

namespace traintrack {

struct ParseError : std::runtime_error {
  int line = 0;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct MapFile {
  GraphMap map;
  std::vector<std::string> generator_names;
  std::vector<std::string> edge_names;
  std::vector<std::string> vertex_names;
  std::vector<std::vector<int>> candidate_ffs;  // candidate invariant edge sets
};

namespace detail {

struct Tok {
  std::vector<std::vector<std::string>> lines;  // token lists, comments stripped
  std::vector<int> line_numbers;
};

// Statements are separated by newlines and ';'.  A '{' closes the statement
// it ends (so section openers read [keyword, {]) and '}' always stands alone.
inline Tok tokenize(const std::string& text) {
  Tok out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  std::vector<std::string> cur;
  auto flush = [&](int ln) {
    if (!cur.empty()) {
      out.lines.push_back(cur);
      out.line_numbers.push_back(ln);
      cur.clear();
    }
  };
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string spaced;
    for (char c : line) {
      if (c == '{' || c == '}' || c == ';')
        spaced += std::string(" ") + c + " ";
      else
        spaced += c;
    }
    std::istringstream ps(spaced);
    std::string t;
    while (ps >> t) {
      if (t == ";") {
        flush(n);
      } else if (t == "{") {
        cur.push_back(t);
        flush(n);
      } else if (t == "}") {
        flush(n);
        cur.push_back(t);
        flush(n);
      } else {
        cur.push_back(t);
      }
    }
    flush(n);
  }
  flush(n);
  return out;
}

}  // namespace detail

inline MapFile parse_map_file(const std::string& text) {
  detail::Tok tok = detail::tokenize(text);
  size_t i = 0;
  auto line_no = [&](size_t idx) {
    return idx < tok.line_numbers.size() ? tok.line_numbers[idx] : -1;
  };
  auto fail = [&](size_t idx, const std::string& msg) -> void {
    throw ParseError(line_no(idx), msg);
  };

  int rank = -1;
  std::vector<std::string> gen_names;
  std::vector<std::string> vertex_names;
  std::vector<std::string> edge_names;
  std::vector<std::pair<int, int>> edge_ends;
  int base = -1;
  std::map<std::string, Word> forward_words;        // generator -> edge word
  std::map<std::string, Word> backward_words;       // edge -> generator word
  std::map<std::string, Word> image_words;          // edge -> edge word
  std::map<std::string, std::string> vertex_images; // vertex -> vertex
  std::vector<std::vector<std::string>> filtration_names;
  std::vector<std::vector<std::string>> ffs_names;
  bool rose_auto = false;

  auto index_of = [&](const std::vector<std::string>& names,
                      const std::string& s) -> int {
    for (size_t k = 0; k < names.size(); ++k)
      if (names[k] == s) return static_cast<int>(k);
    return -1;
  };
  auto parse_name_word = [&](const std::vector<std::string>& names,
                             const std::vector<std::string>& toks, size_t from,
                             size_t to, size_t idx) {
    Word w;
    for (size_t k = from; k < to; ++k) {
      std::string s = toks[k];
      bool inv = !s.empty() && s.back() == '\'';
      if (inv) s.pop_back();
      int g = index_of(names, s);
      if (g < 0) fail(idx, "unknown name '" + s + "'");
      w.push_back(inv ? -(g + 1) : g + 1);
    }
    return w;
  };

  // leading version line
  if (i < tok.lines.size() && tok.lines[i][0] == "format") {
    if (tok.lines[i].size() != 2 || tok.lines[i][1] != "1")
      fail(i, "unsupported format version");
    ++i;
  }

  enum class Section { None, Graph, Marking, Auto, Map, Filtration, Ffs };
  Section sec = Section::None;
  for (; i < tok.lines.size(); ++i) {
    auto& t = tok.lines[i];
    std::string head = t[0];
    if (sec == Section::None) {
      if (head == "rank") {
        if (t.size() != 2) fail(i, "rank expects one integer");
        rank = std::stoi(t[1]);
      } else if (head == "generators") {
        gen_names.assign(t.begin() + 1, t.end());
      } else if (head == "graph" || head == "marking" || head == "auto" ||
                 head == "map" || head == "filtration" || head == "ffs") {
        if (t.back() != "{") fail(i, "expected '{' after " + head);
        sec = head == "graph"      ? Section::Graph
              : head == "marking"  ? Section::Marking
              : head == "auto"     ? Section::Auto
              : head == "map"      ? Section::Map
              : head == "filtration" ? Section::Filtration
                                     : Section::Ffs;
        if (sec == Section::Filtration) filtration_names.clear();
        if (sec == Section::Auto) rose_auto = true;
        // inline body tokens after '{' on the same statement
        std::vector<std::string> rest(t.begin() + 1, t.end());
        // handled via subsequent statements; also allow "{ ... }" inline
        if (rest.size() > 1) {
          // push back a synthetic statement without the braces
          std::vector<std::string> body(rest.begin() + 1, rest.end());
          bool closes = !body.empty() && body.back() == "}";
          if (closes) body.pop_back();
          if (!body.empty()) {
            tok.lines.insert(tok.lines.begin() + i + 1, body);
            tok.line_numbers.insert(tok.line_numbers.begin() + i + 1, line_no(i));
          }
          if (closes) {
            tok.lines.insert(tok.lines.begin() + i + 1 + (body.empty() ? 0 : 1),
                             {"}"});
            tok.line_numbers.insert(
                tok.line_numbers.begin() + i + 1 + (body.empty() ? 0 : 1), line_no(i));
          }
        }
      } else {
        fail(i, "unexpected '" + head + "'");
      }
      continue;
    }
    if (head == "}") {
      sec = Section::None;
      continue;
    }
    switch (sec) {
      case Section::Graph: {
        if (head == "vertices") {
          vertex_names.assign(t.begin() + 1, t.end());
        } else if (head == "edge") {
          if (t.size() != 4) fail(i, "edge expects: edge NAME FROM TO");
          edge_names.push_back(t[1]);
          int a = index_of(vertex_names, t[2]), b = index_of(vertex_names, t[3]);
          if (a < 0 || b < 0) fail(i, "unknown vertex in edge");
          edge_ends.push_back({a, b});
        } else {
          fail(i, "unexpected '" + head + "' in graph section");
        }
        break;
      }
      case Section::Marking: {
        if (head == "base") {
          if (t.size() != 2) fail(i, "base expects one vertex");
          base = index_of(vertex_names, t[1]);
          if (base < 0) fail(i, "unknown base vertex");
        } else if (head == "forward") {
          if (t.size() < 3 || t[2] != "->") fail(i, "forward expects: forward GEN -> WORD");
          forward_words[t[1]] = parse_name_word(edge_names, t, 3, t.size(), i);
        } else if (head == "backward") {
          if (t.size() < 3 || t[2] != "->")
            fail(i, "backward expects: backward EDGE -> WORD");
          backward_words[t[1]] = parse_name_word(gen_names, t, 3, t.size(), i);
        } else {
          fail(i, "unexpected '" + head + "' in marking section");
        }
        break;
      }
      case Section::Auto:
      case Section::Map: {
        if (head == "vertex") {
          if (t.size() != 4 || t[2] != "->") fail(i, "vertex expects: vertex V -> W");
          vertex_images[t[1]] = t[3];
          break;
        }
        if (t.size() < 2 || t[1] != "->") fail(i, "expected: EDGE -> WORD");
        image_words[t[0]] = Word{};  // placeholder, resolved after names known
        // store the raw tokens for later resolution
        // (edges may not be declared yet in rose shorthand)
        {
          std::ostringstream key;
          key << "\x01" << t[0];
          std::vector<std::string> raw(t.begin() + 2, t.end());
          // temporarily park raw words in backward_words under a marked key
          Word enc;
          for (auto& s : raw) {
            (void)s;
          }
          // simpler: stash tokens globally
        }
        // we re-parse below once edge names are fixed; remember tokens:
        // implemented by capturing into a side table
        break;
      }
      case Section::Filtration: {
        filtration_names.push_back(t);
        break;
      }
      case Section::Ffs: {
        ffs_names.push_back(t);
        break;
      }
      case Section::None:
        break;
    }
  }

  // second pass for map images (names are known now)
  std::map<std::string, std::vector<std::string>> image_tokens;
  {
    sec = Section::None;
    for (size_t k = 0; k < tok.lines.size(); ++k) {
      auto& t = tok.lines[k];
      std::string head = t[0];
      if (sec == Section::None) {
        if ((head == "auto" || head == "map") && t.back() == "{") sec = Section::Auto;
        continue;
      }
      if (head == "}") {
        sec = Section::None;
        continue;
      }
      if (head == "vertex") continue;
      if (t.size() >= 2 && t[1] == "->")
        image_tokens[t[0]] = std::vector<std::string>(t.begin() + 2, t.end());
    }
  }

  if (rank <= 0) throw ParseError(0, "missing or invalid rank");
  if (gen_names.empty())
    for (int k = 1; k <= rank; ++k) gen_names.push_back("x" + std::to_string(k));
  if (static_cast<int>(gen_names.size()) != rank)
    throw ParseError(0, "generator count disagrees with rank");

  if (rose_auto) {
    // rose shorthand: edges named by the generators, identity marking
    vertex_names = {"v"};
    edge_names = gen_names;
    edge_ends.assign(rank, {0, 0});
    base = 0;
    for (int k = 0; k < rank; ++k) {
      forward_words[gen_names[k]] = Word{k + 1};
      backward_words[gen_names[k]] = Word{k + 1};
    }
  }
  if (edge_names.empty()) throw ParseError(0, "no graph section and no auto shorthand");
  if (base < 0) throw ParseError(0, "marking base missing");

  // assemble the marked graph
  MarkedGraph mg;
  mg.rank = rank;
  mg.graph.num_vertices = static_cast<int>(vertex_names.size());
  for (auto [a, b] : edge_ends) mg.graph.edges.push_back({a, b});
  mg.marking.base = base;
  auto edge_word_to_path = [&](const Word& w, int start) {
    EdgePath p;
    p.start = start;
    for (Letter x : w)
      p.steps.push_back(x > 0 ? Graph::oriented(x - 1) : Graph::oriented(-x - 1, false));
    return p;
  };
  for (int k = 0; k < rank; ++k) {
    auto it = forward_words.find(gen_names[k]);
    if (it == forward_words.end())
      throw ParseError(0, "marking misses forward word for " + gen_names[k]);
    EdgePath p = edge_word_to_path(it->second, base);
    if (!p.valid(mg.graph)) throw ParseError(0, "forward word is not an edge path");
    mg.marking.forward.push_back(p);
  }
  for (size_t e = 0; e < edge_names.size(); ++e) {
    auto it = backward_words.find(edge_names[e]);
    if (it == backward_words.end())
      throw ParseError(0, "marking misses backward word for " + edge_names[e]);
    mg.marking.backward.push_back(it->second);
  }
  if (!verify_marking(mg)) throw ParseError(0, "marking verification failed");

  // edge images
  std::vector<EdgePath> images;
  for (size_t e = 0; e < edge_names.size(); ++e) {
    auto it = image_tokens.find(edge_names[e]);
    if (it == image_tokens.end())
      throw ParseError(0, "missing image for edge " + edge_names[e]);
    Word w;
    for (std::string s : it->second) {
      bool inv = !s.empty() && s.back() == '\'';
      if (inv) s.pop_back();
      int g = index_of(edge_names, s);
      if (g < 0) throw ParseError(0, "unknown edge '" + s + "' in image");
      w.push_back(inv ? -(g + 1) : g + 1);
    }
    EdgePath p = edge_word_to_path(w, -1);
    if (!p.steps.empty()) p.start = mg.graph.init_of(p.steps.front());
    if (!p.valid(mg.graph))
      throw ParseError(0, "image of " + edge_names[e] + " is not an edge path");
    if (!p.is_tight())
      throw ParseError(0, "image of " + edge_names[e] + " is not tight");
    images.push_back(p);
  }
  // vertex images: explicit or inferred from incident edges
  std::vector<int> vimg(mg.graph.num_vertices, -1);
  for (auto& [vn, wn] : vertex_images) {
    int a = index_of(vertex_names, vn), b = index_of(vertex_names, wn);
    if (a < 0 || b < 0) throw ParseError(0, "unknown vertex in vertex image");
    vimg[a] = b;
  }
  for (size_t e = 0; e < edge_names.size(); ++e) {
    int a = mg.graph.edges[e].init, b = mg.graph.edges[e].term;
    if (vimg[a] == -1 && !images[e].steps.empty()) vimg[a] = images[e].start;
    if (vimg[b] == -1 && !images[e].steps.empty()) vimg[b] = images[e].end(mg.graph);
  }
  for (int v = 0; v < mg.graph.num_vertices; ++v)
    if (vimg[v] == -1) throw ParseError(0, "cannot infer the image of a vertex");

  // filtration
  std::vector<std::vector<int>> strata;
  for (auto& group : filtration_names) {
    std::vector<int> es;
    for (auto& s : group) {
      int e = index_of(edge_names, s);
      if (e < 0) throw ParseError(0, "unknown edge '" + s + "' in filtration");
      es.push_back(e);
    }
    strata.push_back(es);
  }

  MapFile out;
  out.map = GraphMap::make(mg, images, vimg, strata);
  out.map = build_filtration(out.map);
  out.generator_names = gen_names;
  out.edge_names = edge_names;
  out.vertex_names = vertex_names;
  for (auto& group : ffs_names) {
    std::vector<int> es;
    for (auto& s : group) {
      int e = index_of(edge_names, s);
      if (e < 0) throw ParseError(0, "unknown edge '" + s + "' in ffs");
      es.push_back(e);
    }
    out.candidate_ffs.push_back(es);
  }
  return out;
}

// Names for a map that lost its file identity (pipeline outputs): edges get
// e0.., vertices v0.., generators x1...
inline std::vector<std::string> default_edge_names(const GraphMap& f) {
  std::vector<std::string> out;
  for (int e = 0; e < f.graph().num_edges(); ++e) out.push_back("e" + std::to_string(e));
  return out;
}
inline std::vector<std::string> default_vertex_names(const GraphMap& f) {
  std::vector<std::string> out;
  for (int v = 0; v < f.graph().num_vertices; ++v) out.push_back("v" + std::to_string(v));
  return out;
}
inline std::vector<std::string> default_generator_names(int rank) {
  std::vector<std::string> out;
  for (int k = 1; k <= rank; ++k) out.push_back("x" + std::to_string(k));
  return out;
}

inline std::string path_to_string(const EdgePath& p,
                                  const std::vector<std::string>& edge_names) {
  std::string s;
  for (size_t i = 0; i < p.steps.size(); ++i) {
    if (i) s += ' ';
    s += edge_names.at(Graph::edge_id(p.steps[i]));
    if (p.steps[i] < 0) s += '\'';
  }
  return s;
}

inline std::string serialize_map_file(const GraphMap& f,
                                      const std::vector<std::string>& gen_names,
                                      const std::vector<std::string>& edge_names,
                                      const std::vector<std::string>& vertex_names) {
  const Graph& g = f.graph();
  std::ostringstream os;
  os << "format 1\n";
  os << "rank " << f.domain.rank << "\n";
  os << "generators";
  for (auto& s : gen_names) os << " " << s;
  os << "\n";
  os << "graph {\n  vertices";
  for (auto& s : vertex_names) os << " " << s;
  os << "\n";
  for (int e = 0; e < g.num_edges(); ++e)
    os << "  edge " << edge_names[e] << " " << vertex_names[g.edges[e].init] << " "
       << vertex_names[g.edges[e].term] << "\n";
  os << "}\n";
  os << "marking {\n  base " << vertex_names[f.domain.marking.base] << "\n";
  for (int k = 0; k < f.domain.rank; ++k)
    os << "  forward " << gen_names[k] << " -> "
       << path_to_string(f.domain.marking.forward[k], edge_names) << "\n";
  for (int e = 0; e < g.num_edges(); ++e)
    os << "  backward " << edge_names[e] << " -> "
       << word_to_string(f.domain.marking.backward[e], gen_names) << "\n";
  os << "}\n";
  os << "map {\n";
  for (int e = 0; e < g.num_edges(); ++e)
    os << "  " << edge_names[e] << " -> " << path_to_string(f.edge_images[e], edge_names)
       << "\n";
  for (int v = 0; v < g.num_vertices; ++v)
    os << "  vertex " << vertex_names[v] << " -> " << vertex_names[f.vertex_images[v]]
       << "\n";
  os << "}\n";
  os << "filtration {\n";
  for (const auto& stratum : f.strata) {
    os << " ";
    for (int e : stratum) os << " " << edge_names[e];
    os << "\n";
  }
  os << "}\n";
  return os.str();
}

// backward(A) words can be empty; word_to_string writes "1" which the parser
// must accept as the empty word
inline Word parse_generator_word(const std::string& text,
                                 const std::vector<std::string>& gen_names) {
  std::istringstream in(text);
  std::string s;
  Word w;
  while (in >> s) {
    if (s == "1") continue;
    bool inv = !s.empty() && s.back() == '\'';
    if (inv) s.pop_back();
    for (size_t k = 0; k < gen_names.size(); ++k)
      if (gen_names[k] == s) {
        w.push_back(inv ? -(int)(k + 1) : (int)(k + 1));
        s.clear();
        break;
      }
    if (!s.empty()) throw std::invalid_argument("unknown generator '" + s + "'");
  }
  return w;
}

// ---------------------------------------------------------------------------
// Move log replay
// ---------------------------------------------------------------------------

inline GraphMap replay_move_log(GraphMap f, const std::string& log_text) {
  std::istringstream in(log_text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (op == "format") continue;
    if (op == "subdivide") {
      std::map<int, std::vector<int>> cuts;
      std::string spec;
      while (ls >> spec) {
        auto colon = spec.find(':');
        int e = std::stoi(spec.substr(0, colon));
        std::istringstream ks(spec.substr(colon + 1));
        std::string k;
        while (std::getline(ks, k, ',')) cuts[e].push_back(std::stoi(k));
      }
      f = subdivide(f, cuts).map;
    } else if (op == "subdivide-fixed") {
      int e, occ;
      ls >> e >> occ;
      f = subdivide_at_fixed_point(f, e, occ).map;
    } else if (op == "fold-directions") {
      int d1, d2;
      ls >> d1 >> d2;
      f = elementary_fold(f, d1, d2).map;
    } else if (op == "fold-edge") {
      int x;
      ls >> x;
      EdgePath q;
      int s;
      while (ls >> s) q.steps.push_back(s);
      q.start = q.steps.empty() ? -1 : f.graph().init_of(q.steps.front());
      f = detail::fold_identify(f, x, q).map;
    } else if (op == "collapse") {
      std::vector<int> es;
      int e;
      while (ls >> e) es.push_back(e);
      f = collapse_move(f, es).map;
    } else if (op == "valence-two") {
      int v;
      ls >> v;
      f = valence_two_homotopy(f, v).map;
    } else if (op == "slide") {
      int e;
      ls >> e;
      EdgePath tau;
      int s;
      while (ls >> s) tau.steps.push_back(s);
      tau.start = f.graph().edges[e].term;
      f = slide(f, e, tau).map;
    } else if (op == "change-marking") {
      int j;
      ls >> j;
      f = change_marking_via_restriction(f, j).map;
    } else if (op == "reorient") {
      int e;
      ls >> e;
      f = reorient_edge(f, e).map;
    } else if (op == "tree-replacement") {
      std::vector<int> old_edges;
      std::vector<std::pair<int, int>> tree;
      std::string t;
      bool after_arrow = false;
      while (ls >> t) {
        if (t == "->") {
          after_arrow = true;
          continue;
        }
        if (!after_arrow) {
          old_edges.push_back(std::stoi(t));
        } else {
          auto dash = t.find('-');
          tree.push_back({std::stoi(t.substr(0, dash)), std::stoi(t.substr(dash + 1))});
        }
      }
      f = tree_replacement(f, old_edges, tree).map;
    } else {
      throw std::invalid_argument("replay: unknown move '" + op + "'");
    }
  }
  return f;
}

}  // namespace traintrack
