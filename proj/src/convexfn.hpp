#pragma once

#include <functional>
#include <string>

namespace wehrl {

// Convex function Phi on [0,1] with access to its left derivative. Midpoint
// convexity is verified on a 1001-point grid at construction.
class ConvexFn {
  public:
    enum class Tag { Linear, XLogX, Power, Hinge, Custom };

    static ConvexFn linear();               // Phi(t) = t
    static ConvexFn xlogx();                // Phi(t) = t log t, Phi(0) = 0
    static ConvexFn power(double p);        // Phi(t) = t^p, p > 1
    static ConvexFn hinge(double t0);       // 0 on [0,t0], t - t0 on [t0,1]
    static ConvexFn custom(std::function<double(double)> f,
                           std::function<double(double)> left_derivative,
                           std::string name);

    // Parse "linear" | "xlogx" | "power:P" | "hinge:T0".
    static ConvexFn parse(const std::string& spec);

    double operator()(double t) const { return f_(t); }
    double left_derivative(double t) const { return fp_(t); }

    Tag tag() const { return tag_; }
    double param() const { return param_; }  // p or t0
    const std::string& name() const { return name_; }
    bool is_linear() const { return tag_ == Tag::Linear; }

  private:
    ConvexFn(Tag tag, double param, std::function<double(double)> f,
             std::function<double(double)> fp, std::string name);
    void check_convexity() const;

    Tag tag_;
    double param_;
    std::function<double(double)> f_;
    std::function<double(double)> fp_;
    std::string name_;
};

}  // namespace wehrl
