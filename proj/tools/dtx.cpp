// dtx: command-line front end for the explanation engines and instance generators.

#include <dtx/dtx.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace dtx;
using json = nlohmann::ordered_json;

namespace
{

enum exit_code : int
{
  ok = 0,
  bad_input = 2,
  unknown = 3,
  refused = 4
};

std::string read_file( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
    throw invalid_input( "cannot open '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output( const std::string& path, const std::string& text )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path );
  if ( !out )
    throw invalid_input( "cannot write '" + path + "'" );
  out << text;
}

// tree text preceded by "# key=value" lines
std::string annotated( const std::vector<std::pair<std::string, std::string>>& meta, const std::string& body )
{
  std::string out;
  for ( auto const& [k, v] : meta )
    out += "# " + k + "=" + v + "\n";
  return out + body;
}

struct explain_request
{
  std::string instance;
  std::string delta = "1";
};

struct explain_config
{
  std::string mode = "minimum";
  std::string engine = "oracle";
  bool monotone = false;
  bool force_probabilistic = false;
  std::optional<std::string> solver;
};

struct explain_result
{
  partial_instance reason;
  dyadic probability;
  uint32_t sat_calls = 0;
  double millis = 0;
};

explain_result run_explain( const decision_diagram& t, const partial_instance& x, const threshold& delta,
                            const explain_config& cfg )
{
  require_dimension( t, x );
  require( x.is_total(), "instance must be fully defined" );
  auto const start = std::chrono::steady_clock::now();
  explain_result r;
  auto const& e = cfg.engine;
  if ( e == "greedy" )
  {
    require( cfg.mode == "minimal", "engine greedy computes minimal explanations only" );
    if ( cfg.monotone )
      r.reason = monotone_minimal_delta_sr( t, x, delta );
    else
    {
      require( delta.is_one(), "engine greedy needs delta = 1 or --monotone" );
      r.reason = minimal_sr( t, x );
    }
  }
  else if ( e == "oracle" )
    r.reason = oracle_minimum_sr( t, x, delta );
  else if ( e == "dp" )
    r.reason = dp_minimum_sr( t, x, delta );
  else if ( e == "sat" )
  {
    sat_driver_options o;
    if ( cfg.solver )
      o.solver.command = cfg.solver->empty() ? std::nullopt : std::optional<std::string>( *cfg.solver );
    o.force_probabilistic = cfg.force_probabilistic;
    auto const s = minimum_sr_sat( t, x, delta, o );
    r.reason = s.reason;
    r.sat_calls = static_cast<uint32_t>( s.probes.size() );
  }
  else
    throw invalid_input( "unknown engine '" + e + "'" );
  r.probability = class_prob( t, r.reason, evaluate( t, x ) );
  r.millis = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
  return r;
}

json explain_json( const explain_request& q, const threshold& delta, const explain_config& cfg, const explain_result& r )
{
  return { { "instance", q.instance },
           { "delta", delta.str() },
           { "mode", cfg.mode },
           { "engine", cfg.engine },
           { "explanation", r.reason.str() },
           { "probability", r.probability.fraction() },
           { "decimal", r.probability.decimal() },
           { "size", r.reason.defined_count() } };
}

std::string explain_text( const explain_result& r )
{
  return r.reason.str() + " " + r.probability.fraction() + " " + std::to_string( r.reason.defined_count() );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Exact explanations for decision trees" };
  app.require_subcommand( 1 );
  bool json_out = false;
  app.add_flag( "--json", json_out, "Print json-lines instead of text" );

  // prob
  auto* prob = app.add_subcommand( "prob", "Probability of class 1 over completions of a partial instance" );
  std::string tree_path, instance;
  prob->add_option( "tree", tree_path, "Tree file" )->required();
  prob->add_option( "partial", instance, "Partial instance over {0,1,*}" )->required();

  // explain
  auto* explain = app.add_subcommand( "explain", "Compute a delta-sufficient reason" );
  explain_config cfg;
  std::string delta_text = "1", stats_path, batch_path, solver_cmd;
  unsigned jobs = 1;
  explain->add_option( "tree", tree_path, "Tree file" )->required();
  explain->add_option( "instance", instance, "Instance to explain (omit with --batch)" );
  explain->add_option( "--delta", delta_text, "Threshold p/q or decimal" );
  explain->add_option( "--mode", cfg.mode, "minimal or minimum" )->check( CLI::IsMember( { "minimal", "minimum" } ) );
  explain->add_option( "--engine", cfg.engine, "oracle, greedy, dp or sat" )
      ->check( CLI::IsMember( { "oracle", "greedy", "dp", "sat" } ) );
  explain->add_flag( "--monotone", cfg.monotone, "Trust the model to be monotone (greedy engine)" );
  explain->add_flag( "--probabilistic", cfg.force_probabilistic, "Use the probabilistic encoding even for delta = 1" );
  explain->add_option( "--solver", solver_cmd, "External solver command with {cnf}" );
  explain->add_option( "--stats", stats_path, "Append a CSV row per query" );
  explain->add_option( "--batch", batch_path, "File with one '<instance> [delta]' per line" );
  explain->add_option( "--jobs", jobs, "Parallel queries in batch mode" )->check( CLI::PositiveNumber );

  // encode
  auto* encode = app.add_subcommand( "encode", "Write the CNF deciding a delta-SR of at most k features" );
  uint32_t k = 0;
  std::string out_path;
  encode->add_option( "tree", tree_path, "Tree file" )->required();
  encode->add_option( "instance", instance, "Instance" )->required();
  encode->add_option( "--delta", delta_text, "Threshold p/q or decimal" );
  encode->add_option( "-k", k, "Feature budget" )->required();
  encode->add_option( "-o,--output", out_path, "Output file (default stdout)" );
  encode->add_flag( "--probabilistic", cfg.force_probabilistic, "Use the probabilistic encoding even for delta = 1" );

  // decode
  auto* decode = app.add_subcommand( "decode", "Read an explanation off a solver answer" );
  std::string cnf_path, answer_path;
  decode->add_option( "cnf", cnf_path, "CNF written by encode" )->required();
  decode->add_option( "instance", instance, "Instance that was encoded" )->required();
  decode->add_option( "answer", answer_path, "Solver output with s and v lines (default stdin)" );

  // solve
  auto* solve_cmd = app.add_subcommand( "solve", "Solve a DIMACS file" );
  double time_limit = 0;
  solve_cmd->add_option( "cnf", cnf_path, "DIMACS file" )->required();
  solve_cmd->add_option( "--solver", solver_cmd, "External solver command with {cnf}" );
  solve_cmd->add_option( "--time-limit", time_limit, "Seconds, built-in solver" );

  // check-sub
  auto* check_sub = app.add_subcommand( "check-sub", "Does a proper sub-instance reach at least the same probability?" );
  check_sub->add_option( "tree", tree_path, "Tree file" )->required();
  check_sub->add_option( "partial", instance, "Partial instance" )->required();

  // gen
  auto* gen = app.add_subcommand( "gen", "Instance generators" );
  gen->require_subcommand( 1 );
  uint32_t n = 0, leaves = 8;
  uint64_t seed = 1;
  bool monotone = false;
  std::string graph_path, cnf_in, partial;
  auto* g_tc = gen->add_subcommand( "tc", "Chain tree accepting floor(delta 2^n) instances" );
  g_tc->add_option( "-n", n, "Dimension" )->required();
  g_tc->add_option( "--delta", delta_text, "Threshold below 1" )->required();
  auto* g_fd = gen->add_subcommand( "fdelta", "Threshold tree with copies of a tree at its true leaves" );
  g_fd->add_option( "tree", tree_path, "Tree file" )->required();
  g_fd->add_option( "--delta", delta_text, "Threshold below 1" )->required();
  auto* g_ts = gen->add_subcommand( "tstar", "Chain of threshold gadgets for the minimum-size reduction" );
  g_ts->add_option( "tree", tree_path, "Tree file" )->required();
  g_ts->add_option( "instance", instance, "Instance" )->required();
  g_ts->add_option( "-k", k, "Size bound" )->required();
  g_ts->add_option( "--delta", delta_text, "Threshold below 1" )->required();
  auto* g_cm = gen->add_subcommand( "clique-mec", "Weighted 2-CNF from a graph" );
  g_cm->add_option( "graph", graph_path, "Edge list file" )->required();
  g_cm->add_option( "-k", k, "Clique size" )->required();
  auto* g_mt = gen->add_subcommand( "mec-tree", "Tree from a weighted CNF and a full assignment" );
  g_mt->add_option( "cnf", cnf_in, "Weighted CNF file" )->required();
  g_mt->add_option( "sigma", partial, "Assignment; default all ones" );
  auto* g_db = gen->add_subcommand( "double", "Doubling transform of a tree under a partial instance" );
  g_db->add_option( "tree", tree_path, "Tree file" )->required();
  g_db->add_option( "partial", partial, "Partial instance" )->required();
  auto* g_tm = gen->add_subcommand( "tstar-min", "Tree for the minimal-reason reduction" );
  g_tm->add_option( "tree", tree_path, "Tree file" )->required();
  g_tm->add_option( "partial", partial, "Partial instance; the pair must be strongly balanced" )->required();
  auto* g_rnd = gen->add_subcommand( "random", "Random tree" );
  g_rnd->add_option( "-n", n, "Dimension" )->required();
  g_rnd->add_option( "--leaves", leaves, "Leaves" );
  g_rnd->add_option( "--seed", seed, "Seed" );
  g_rnd->add_flag( "--monotone", monotone, "Random monotone function" );
  for ( auto* sc : gen->get_subcommands( {} ) )
    sc->add_option( "-o,--output", out_path, "Output file (default stdout)" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::CallForHelp& e )
  {
    return app.exit( e );
  }
  catch ( const CLI::CallForAllHelp& e )
  {
    return app.exit( e );
  }
  catch ( const CLI::ParseError& e )
  {
    app.exit( e );
    return bad_input;
  }

  try
  {
    if ( *prob )
    {
      auto const t = load_diagram( tree_path );
      auto const y = partial_instance::parse( instance );
      auto const p = positive_prob( t, y );
      if ( json_out )
        std::cout << json{ { "partial", y.str() }, { "probability", p.fraction() }, { "decimal", p.decimal() } }.dump()
                  << "\n";
      else
        std::cout << p.fraction() << " " << p.decimal() << "\n";
    }
    else if ( *explain )
    {
      auto const t = load_diagram( tree_path );
      if ( explain->count( "--solver" ) )
        cfg.solver = solver_cmd;
      std::vector<explain_request> queries;
      if ( !batch_path.empty() )
      {
        std::istringstream in( read_file( batch_path ) );
        std::string line;
        while ( std::getline( in, line ) )
        {
          if ( auto h = line.find( '#' ); h != std::string::npos )
            line.erase( h );
          std::istringstream ls( line );
          explain_request q;
          if ( !( ls >> q.instance ) )
            continue;
          if ( !( ls >> q.delta ) )
            q.delta = delta_text;
          queries.push_back( q );
        }
      }
      else
      {
        require( !instance.empty(), "an instance or --batch is required" );
        queries.push_back( { instance, delta_text } );
      }

      // validate everything before running anything
      std::vector<partial_instance> xs;
      std::vector<threshold> deltas;
      for ( auto const& q : queries )
      {
        xs.push_back( partial_instance::parse( q.instance ) );
        deltas.push_back( parse_threshold( q.delta ) );
        require_dimension( t, xs.back() );
        require( xs.back().is_total(), "instance must be fully defined" );
      }
      if ( cfg.engine == "greedy" && cfg.mode != "minimal" )
        throw invalid_input( "engine greedy computes minimal explanations only" );

      std::vector<std::optional<explain_result>> results( queries.size() );
      std::vector<std::exception_ptr> errors( queries.size() );
      std::atomic<size_t> next{ 0 };
      auto worker = [&]() {
        for ( size_t i; ( i = next++ ) < queries.size(); )
        {
          try
          {
            results[i] = run_explain( t, xs[i], deltas[i], cfg );
          }
          catch ( ... )
          {
            errors[i] = std::current_exception();
          }
        }
      };
      std::vector<std::thread> pool;
      for ( unsigned j = 1; j < std::min<size_t>( jobs, queries.size() ); ++j )
        pool.emplace_back( worker );
      worker();
      for ( auto& th : pool )
        th.join();

      std::ofstream stats;
      if ( !stats_path.empty() )
      {
        bool const fresh = !std::ifstream( stats_path ).good();
        stats.open( stats_path, std::ios::app );
        if ( fresh )
          stats << "engine,mode,dimension,leaves,instance,delta,size,probability,sat_calls,millis\n";
      }
      for ( size_t i = 0; i < queries.size(); ++i )
      {
        if ( errors[i] )
          std::rethrow_exception( errors[i] );
        auto const& r = *results[i];
        if ( json_out )
          std::cout << explain_json( queries[i], deltas[i], cfg, r ).dump() << "\n";
        else
          std::cout << explain_text( r ) << "\n";
        if ( stats.is_open() )
          stats << cfg.engine << "," << cfg.mode << "," << t.dimension() << "," << t.leaf_count() << ","
                << queries[i].instance << "," << deltas[i].str() << "," << r.reason.defined_count() << ","
                << r.probability.fraction() << "," << r.sat_calls << "," << r.millis << "\n";
      }
    }
    else if ( *encode )
    {
      auto const t = load_diagram( tree_path );
      auto const x = partial_instance::parse( instance );
      auto const delta = parse_threshold( delta_text );
      require( k <= t.dimension(), "k exceeds the dimension" );
      auto const e = encode_sr( t, x, k, delta, cfg.force_probabilistic );
      write_output( out_path, write_dimacs( e.cnf ) );
      if ( !out_path.empty() && out_path != "-" )
      {
        if ( json_out )
          std::cout << json{ { "encoding", e.probabilistic ? "probabilistic" : "deterministic" },
                             { "vars", e.cnf.num_vars },
                             { "clauses", e.cnf.clauses.size() } }
                           .dump()
                    << "\n";
        else
          std::cout << ( e.probabilistic ? "probabilistic" : "deterministic" ) << " " << e.cnf.num_vars << " "
                    << e.cnf.clauses.size() << "\n";
      }
    }
    else if ( *decode )
    {
      auto const f = parse_dimacs( read_file( cnf_path ) );
      auto const x = partial_instance::parse( instance );
      auto const map = feature_map_from_comments( f );
      require( map.size() == x.size(), "instance length differs from the encoded dimension" );
      std::string answer;
      if ( answer_path.empty() || answer_path == "-" )
      {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        answer = ss.str();
      }
      else
        answer = read_file( answer_path );
      auto const res = parse_solver_output( answer, f.num_vars );
      if ( res.status == sat_status::unknown )
        throw solver_unknown( "solver output has no verdict" );
      if ( res.status == sat_status::unsat )
      {
        std::cout << ( json_out ? json{ { "status", "unsat" } }.dump() : std::string( "UNSAT" ) ) << "\n";
        return ok;
      }
      if ( !f.satisfied_by( res.model ) )
        throw solver_unknown( "model does not satisfy the formula" );
      auto const y = decode_model( map, x, res.model );
      if ( json_out )
        std::cout << json{ { "status", "sat" }, { "explanation", y.str() }, { "size", y.defined_count() } }.dump()
                  << "\n";
      else
        std::cout << y.str() << "\n";
    }
    else if ( *solve_cmd )
    {
      auto const f = parse_dimacs( read_file( cnf_path ) );
      auto config = solver_config::from_environment();
      if ( solve_cmd->count( "--solver" ) )
        config.command = solver_cmd.empty() ? std::nullopt : std::optional<std::string>( solver_cmd );
      config.time_limit_seconds = time_limit;
      auto const res = solve( f, config );
      if ( res.status == sat_status::unknown )
      {
        std::cout << "s UNKNOWN\n";
        return unknown;
      }
      if ( res.status == sat_status::unsat )
      {
        std::cout << "s UNSATISFIABLE\n";
        return ok;
      }
      std::cout << "s SATISFIABLE\nv";
      for ( uint32_t v = 1; v <= f.num_vars; ++v )
        std::cout << " " << ( res.model[v] ? "" : "-" ) << v;
      std::cout << " 0\n";
    }
    else if ( *check_sub )
    {
      auto const t = load_diagram( tree_path );
      auto const y = partial_instance::parse( instance );
      bool const yes = oracle_check_sub_sr( t, y );
      if ( json_out )
        std::cout << json{ { "partial", y.str() }, { "answer", yes } }.dump() << "\n";
      else
        std::cout << ( yes ? "yes" : "no" ) << "\n";
    }
    else if ( *g_tc )
    {
      auto const r = gen_tc( n, parse_threshold( delta_text ) );
      write_output( out_path, annotated( { { "c", r.c.str() }, { "x_dagger", r.x_dagger.str() } }, write_diagram( r.tree ) ) );
    }
    else if ( *g_fd )
    {
      auto const r = gen_fdelta( load_diagram( tree_path ), parse_threshold( delta_text ) );
      write_output( out_path, annotated( { { "t_delta_dimension", std::to_string( r.d ) },
                                           { "delta_prime", r.delta_prime.fraction() },
                                           { "x_dagger", r.x_dagger.str() } },
                                         write_diagram( r.tree ) ) );
    }
    else if ( *g_ts )
    {
      auto const r = gen_tstar( load_diagram( tree_path ), partial_instance::parse( instance ), k,
                                parse_threshold( delta_text ) );
      write_output( out_path, annotated( { { "x_star", r.x_star.str() },
                                           { "chain", std::to_string( r.chain ) },
                                           { "delta_prime", r.fdelta.delta_prime.fraction() } },
                                         write_diagram( r.tree ) ) );
    }
    else if ( *g_cm )
    {
      auto const r = clique_to_mec( parse_graph( read_file( graph_path ) ), k );
      std::string head = "c k=" + std::to_string( r.k ) + "\nc sigma=" + r.sigma.str() + "\n";
      if ( r.trivial_no )
        head += "c trivial_no\n";
      write_output( out_path, head + write_weighted_cnf( r.phi ) );
    }
    else if ( *g_mt )
    {
      auto const phi = parse_weighted_cnf( read_file( cnf_in ) );
      auto const sigma = partial.empty() ? partial_instance( phi.num_vars, value::one ) : partial_instance::parse( partial );
      auto const r = mec_to_checksubsr( phi, sigma );
      write_output( out_path, annotated( { { "y", r.y.str() }, { "slots", std::to_string( r.slots ) } },
                                         write_diagram( r.tree ) ) );
    }
    else if ( *g_db )
    {
      auto const r = doubling_transform( load_diagram( tree_path ), partial_instance::parse( partial ) );
      write_output( out_path, annotated( { { "y_star", r.y_star.str() } }, write_diagram( r.tree ) ) );
    }
    else if ( *g_tm )
    {
      auto const r = assemble_tstar_minimal( load_diagram( tree_path ), partial_instance::parse( partial ) );
      write_output( out_path, annotated( { { "x", r.x.str() },
                                           { "y_star", r.y_star.str() },
                                           { "delta", r.delta.fraction() },
                                           { "m", std::to_string( r.m ) },
                                           { "u", std::to_string( r.u ) } },
                                         write_diagram( r.tree ) ) );
    }
    else if ( *g_rnd )
    {
      require( n >= 1 && n <= 64, "dimension must be in 1..64" );
      rng r( seed );
      require( !monotone || n <= 20, "monotone generation enumerates 2^n inputs; use n <= 20" );
      auto const t = monotone ? random_monotone_tree( n, r ) : random_tree( n, leaves, r );
      write_output( out_path, annotated( { { "seed", std::to_string( seed ) } }, write_diagram( t ) ) );
    }
  }
  catch ( const invalid_input& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return bad_input;
  }
  catch ( const solver_unknown& e )
  {
    std::cerr << "solver: " << e.what() << "\n";
    return unknown;
  }
  catch ( const budget_exceeded& e )
  {
    std::cerr << "refused: " << e.what() << "\n";
    return refused;
  }
  return ok;
}
