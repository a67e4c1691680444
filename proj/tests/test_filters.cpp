#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "revfilt/convolve.hpp"
#include "revfilt/error.hpp"
#include "revfilt/external_filter.hpp"
#include "revfilt/filter_spec.hpp"
#include "revfilt/filters.hpp"
#include "revfilt/netpbm.hpp"
#include "test_util.hpp"

using namespace revfilt;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no revfilt::Error thrown";
  return ErrorKind::InvalidParameter;
}

// Values that survive 8-bit quantization unchanged.
Image byte_image(int h, int w, int c) {
  std::vector<double> v(static_cast<std::size_t>(h) * w * c);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 53 + 7) % 256) / 255.0;
  return Image(h, w, c, v);
}

}  // namespace

TEST(Median, HandExample) {
  const Image x(3, 3, 1, {0.9, 0.1, 0.2, 0.3, 0.5, 0.4, 0.8, 0.7, 0.6});
  const Image y = median_filter(x, 3);
  EXPECT_DOUBLE_EQ(y.at(1, 1), 0.5);
  // corner window under replicate: {0.9,0.9,0.1,0.9,0.9,0.1,0.3,0.3,0.5} -> 0.5
  EXPECT_DOUBLE_EQ(y.at(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(y.at(2, 2), 0.6);
  EXPECT_THROW(make_median(4), Error);
}

TEST(Median, RemovesImpulse) {
  Image x = Image::filled(7, 7, 1, 0.2);
  std::vector<double> v(x.data().begin(), x.data().end());
  v[3 * 7 + 3] = 1.0;
  EXPECT_EQ(median_filter(Image(7, 7, 1, v), 3), x);
}

TEST(EdgePreserving, ConstantImagesAreFixed) {
  const Image flat = Image::filled(12, 10, 3, 0.37);
  const FilterPtr filters[] = {make_bilateral(2.0, 0.1), make_guided(5, 0.01),
                               make_guided_gaussian(5, 0.1, 2.0), make_rolling_guidance(2.0, 0.05, 3),
                               make_median(5)};
  for (const auto& f : filters) {
    EXPECT_LT(testutil::max_abs_diff((*f)(flat), flat), 1e-12) << f->name();
  }
}

TEST(EdgePreserving, BilateralKeepsStepEdge) {
  std::vector<double> v(16 * 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) v[y * 16 + x] = x < 8 ? 0.1 : 0.9;
  const Image step(16, 16, 1, v);
  const Image bf = (*make_bilateral(3.0, 0.05))(step);
  const Image gauss = (*make_gaussian(3.0))(step);
  EXPECT_LT(testutil::max_abs_diff(bf, step), 1e-6);
  EXPECT_GT(testutil::max_abs_diff(gauss, step), 0.1);
}

TEST(EdgePreserving, GuidedWithHugeEpsIsBoxMean) {
  const Image x = testutil::random_image(10, 10, 1, 3);
  const Image gf = guided_filter(x, x, 3, 1e12);
  // a -> 0, b -> box mean of x; the output is the box mean of b.
  const Image box = convolve(convolve(x, box_kernel(3), Boundary::Replicate), box_kernel(3),
                             Boundary::Replicate);
  EXPECT_LT(testutil::max_abs_diff(gf, box), 1e-9);
}

TEST(EdgePreserving, JointBilateralWithFlatGuideIsGaussian) {
  const Image x = testutil::random_image(15, 15, 1, 8);
  const Image jb = joint_bilateral(x, Image::filled(15, 15, 1, 0.5), 1.5, 0.1);
  const Image g = convolve(x, gaussian_kernel(1.5, 2 * 3 + 1), Boundary::Replicate);
  EXPECT_LT(testutil::max_abs_diff(jb, g), 1e-12);
}

TEST(FilterSpec, ParseAndBuild) {
  const FilterSpec s = parse_filter_spec("gaussian:sigma=1.5,size=9,boundary=circular");
  EXPECT_EQ(s.name, "gaussian");
  EXPECT_EQ(s.params.at("size"), "9");
  const FilterPtr g = make_filter(s);
  ASSERT_NE(g->kernel(), nullptr);
  EXPECT_EQ(g->kernel()->height(), 9);
  EXPECT_EQ(g->boundary(), Boundary::Circular);

  EXPECT_EQ(make_filter("identity")->name(), "identity");
  EXPECT_EQ(make_filter("median:n=3")->kernel(), nullptr);
  EXPECT_EQ(make_filter("average:n=3")->kernel()->width(), 3);
  for (const char* ok : {"disk:r=3", "motion:length=20,angle=45", "log:size=7,sigma=0.4",
                         "bilateral:sigma_s=3,sigma_r=0.05", "guided:window=5,eps=0.1",
                         "guided_gauss:window=5,eps=0.1,sigma=5", "rgf:sigma_s=3,sigma_r=0.05,iters=4"}) {
    EXPECT_NO_THROW(make_filter(ok)) << ok;
  }
}

TEST(FilterSpec, Rejections) {
  EXPECT_EQ(kind_of([] { make_filter("nope:a=1"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_filter("gaussian"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_filter("gaussian:sigma=1,colour=red"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_filter("gaussian:sigma=abc"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { parse_filter_spec("gaussian:sigma=1,sigma=2"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { parse_filter_spec("gaussian:sigma"); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_filter("average:n=2.5"); }), ErrorKind::InvalidParameter);
}

TEST(FilterSpec, QuotedValuesKeepCommas) {
  const FilterSpec s = parse_filter_spec("external:cmd=\"./f --a,b\",timeout=5");
  EXPECT_EQ(s.params.at("cmd"), "./f --a,b");
  EXPECT_EQ(s.params.at("timeout"), "5");
}

TEST(FilterSpec, KernelText) {
  const Kernel k = read_kernel_text("# box\n0 1 0\n1 1 1\n0 1 0\n");
  EXPECT_EQ(k.height(), 3);
  EXPECT_EQ(k.at(-1, 0), 1.0);
  EXPECT_EQ(k.at(-1, -1), 0.0);
  EXPECT_THROW(read_kernel_text("1 2\n3\n"), Error);
}

TEST(External, SplitCommand) {
  using V = std::vector<std::string>;
  EXPECT_EQ(split_command("a b  c"), (V{"a", "b", "c"}));
  EXPECT_EQ(split_command("'a b' \"c d\" e\\ f"), (V{"a b", "c d", "e f"}));
  EXPECT_THROW(split_command("'unterminated"), Error);
}

TEST(External, MatchesInProcessBoxBlur) {
  for (int c : {1, 3}) {
    const Image x = byte_image(9, 11, c);
    const FilterPtr ext = make_external({REVFILT_BOX_BLUR});
    const Image got = (*ext)(x);
    const Image want = decode_netpbm(encode_netpbm(convolve(x, box_kernel(3), Boundary::Replicate)));
    EXPECT_EQ(got, want);
  }
}

TEST(External, SpecRouting) {
  const FilterPtr f = make_filter(std::string("external:cmd=\"") + REVFILT_BOX_BLUR + "\",timeout=10");
  EXPECT_EQ(f->name(), "external");
  EXPECT_EQ((*f)(byte_image(5, 5, 1)).height(), 5);
}

TEST(External, Failures) {
  const Image x = byte_image(6, 6, 1);
  try {
    (*make_external({REVFILT_BOX_BLUR, "--fail"}))(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProcessFailure);
    EXPECT_NE(std::string(e.what()).find("asked to fail"), std::string::npos);
  }
  EXPECT_EQ(kind_of([&] { (*make_external({REVFILT_BOX_BLUR, "--garbage"}))(x); }),
            ErrorKind::ProtocolViolation);
  EXPECT_EQ(kind_of([&] { (*make_external({REVFILT_BOX_BLUR, "--shrink"}))(x); }),
            ErrorKind::ProtocolViolation);
  EXPECT_EQ(kind_of([&] { (*make_external({REVFILT_BOX_BLUR, "--sleep"}, {}, 0.3))(x); }),
            ErrorKind::Timeout);
  EXPECT_EQ(kind_of([&] { (*make_external({"/nonexistent/filter/binary"}))(x); }),
            ErrorKind::ProcessFailure);
}
